"""Instance-level verification of first-prolongation vanishing and of the
bracket identities satisfied by first-level elements.

Notation used below, for ``L`` of level 1 and ``X, Y`` in m:
``L_X = [L, X] = L(X)`` and ``L_{X|Y} = [[L, X], Y]``; ``E^r . W`` is
``ad_E^r(W)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .algebra import Element, add_scaled, lie_axiom_violations
from .exact import conj, div, echelon, format_scalar
from .prolongation import (DEFAULT_MAX_LEVEL, DegreeShiftMap, Tower, determined_by_degree_one,
                           format_map, grading_derivation, in_level_span, prolong_until_zero)
from .symbol import CRSymbol, integrability_violations, make_symbol

PASS, FAIL, VACUOUS = "pass", "fail", "vacuous"


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""
    witness: dict | None = None

    def __post_init__(self):
        if self.status not in (PASS, FAIL, VACUOUS):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and not self.witness:
            raise ValueError("a failed check needs a witness")

    def to_dict(self) -> dict:
        out = {"status": self.status, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


# -- evaluation helpers ---------------------------------------------------

class LevelOneCalculus:
    """Brackets involving a fixed level-1 map ``L``."""

    def __init__(self, tower: Tower, L: DegreeShiftMap):
        if L.shift != 1:
            raise ValueError("L must have degree 1")
        self.tower = tower
        self.s = tower.s
        self.L = L

    def grade(self, x) -> int:
        d = self.s.degree_of(x)
        if d is None:
            raise ValueError("element must be homogeneous and nonzero")
        return d

    def L_(self, x):
        """``(grade, coordinates)`` of ``L_x``."""
        if not x:
            return None, {}
        return 1 - self.grade(x), self.tower.apply(self.L, x)

    def L_bar(self, x, y) -> Element:
        """``L_{x|y}``, always an element of m for x, y in m."""
        g, v = self.L_(x)
        if g is None or not y:
            return Element()
        return Element(self.tower.bracket(g, v, y))

    def ad_pow(self, e, r: int, w) -> Element:
        out = Element(w)
        for _ in range(r):
            out = self.s.bracket(e, out)
        return out

    def L_m(self, x) -> Element:
        """``L_x`` for ``x`` of degree at least 2 (so that it lies in m)."""
        g, v = self.L_(x)
        if g is None:
            return Element()
        if g >= 0:
            raise ValueError("L_x is not in m")
        return Element(v)


def _fmt(s: CRSymbol, x) -> str:
    return s.format(Element(x))


# -- identity checks --------------------------------------------------------

def check_bracket_identities(tower: Tower, L: DegreeShiftMap, E, W, r: int):
    """Compare ``L_{E^r.W}`` with its expansion in ``L_{E|W}``, ``L_{W|E}``, ``L_{E|E}``.

    Returns ``(status, witness)``.
    """
    calc = LevelOneCalculus(tower, L)
    s = tower.s
    E, W = Element(E), Element(W)
    if r < 1:
        raise ValueError("r must be >= 1")
    lhs = calc.L_m(calc.ad_pow(E, r, W)) if calc.ad_pow(E, r, W) else Element()
    first = calc.L_bar(E, W) * r - calc.L_bar(W, E)
    rhs = calc.ad_pow(E, r - 1, first)
    if r >= 2:
        lee = calc.L_bar(E, E)
        rhs = rhs + calc.ad_pow(E, r - 2, s.bracket(lee, W)) * Fraction(r * (r - 1), 2)
    if lhs == rhs:
        return PASS, None
    return FAIL, {"E": _fmt(s, E), "W": _fmt(s, W), "r": r, "lhs": _fmt(s, lhs), "rhs": _fmt(s, rhs)}


def bracket_identity_suite(tower: Tower, L: DegreeShiftMap, r_max: int):
    """All holomorphic basis ``E``, all basis ``W`` and ``1 <= r <= r_max``."""
    s = tower.s
    count = 0
    for e in s.holomorphic:
        for w in range(s.dim):
            for r in range(1, r_max + 1):
                status, wit = check_bracket_identities(tower, L, {e: 1}, {w: 1}, r)
                count += 1
                if status == FAIL:
                    return FAIL, wit, count
    return PASS, None, count


def check_lemma_quadratic(tower: Tower, L: DegreeShiftMap):
    """``L_{E|E}`` proportional to ``E`` and ``L_{E|E'} = (a(E')E + a(E)E')/2``.

    Returns ``(status, alpha, witness)`` with ``alpha[i] = a(E_i)``.
    """
    calc = LevelOneCalculus(tower, L)
    s = tower.s
    alpha = []
    for e in s.holomorphic:
        v = calc.L_bar({e: 1}, {e: 1})
        if set(v) - {e}:
            return FAIL, None, {"E": s.label(e), "L_{E|E}": _fmt(s, v),
                                "reason": "not proportional to E"}
        alpha.append(v.get(e, 0))
    for (a, e), (b, f) in product(enumerate(s.holomorphic), repeat=2):
        lhs = calc.L_bar({e: 1}, {f: 1})
        rhs = Element(add_scaled({e: Fraction(1, 2) * alpha[b]}, {f: 1}, Fraction(1, 2) * alpha[a]))
        if lhs != rhs:
            return FAIL, alpha, {"E": s.label(e), "E'": s.label(f), "lhs": _fmt(s, lhs),
                                 "rhs": _fmt(s, rhs)}
    return PASS, alpha, None


def candidate_eigenvalues(mu: int, alpha) -> tuple:
    return (-alpha * Fraction(mu - 1, 2), -alpha * Fraction(mu - 2, 2))


def _matmul(a, b, n):
    return [[sum((a[i][k] * b[k][j] for k in range(n)), 0) for j in range(n)] for i in range(n)]


def check_eigenstructure(tower: Tower, L: DegreeShiftMap, E):
    """Action of ``L_E`` on the antiholomorphic part of degree -1.

    Returns ``(status, eigenvalues, witness)``.
    """
    s = tower.s
    calc = LevelOneCalculus(tower, L)
    E = Element(E)
    if set(E) - set(s.holomorphic):
        raise ValueError("E must be holomorphic of degree -1")
    status, alpha, wit = check_lemma_quadratic(tower, L)
    if status == FAIL and alpha is None:
        return FAIL, [], wit
    aE = sum((c * alpha[s.holomorphic.index(e)] for e, c in E.items()), 0)
    anti = s.antiholomorphic
    n = len(anti)
    cols = []
    for f in anti:
        img = calc.L_bar(E, {f: 1})
        if set(img) - set(anti):
            return FAIL, [], {"E": _fmt(s, E), "F": s.label(f), "image": _fmt(s, img),
                              "reason": "image leaves the antiholomorphic part"}
        cols.append([img.get(g, 0) for g in anti])
    M = [[cols[j][i] for j in range(n)] for i in range(n)]
    r1, r2 = candidate_eigenvalues(s.depth, aE)
    if not aE:
        if any(x for row in M for x in row):
            return FAIL, [], {"E": _fmt(s, E), "alpha(E)": "0", "matrix": _fmt_matrix(M),
                              "reason": "alpha(E) = 0 but the action is nonzero"}
        return PASS, [0] * n, None
    A1 = [[M[i][j] - (r1 if i == j else 0) for j in range(n)] for i in range(n)]
    A2 = [[M[i][j] - (r2 if i == j else 0) for j in range(n)] for i in range(n)]
    prod = _matmul(A1, A2, n)
    if any(x for row in prod for x in row):
        return FAIL, [], {"E": _fmt(s, E), "alpha(E)": format_scalar(aE), "matrix": _fmt_matrix(M),
                          "candidates": [format_scalar(r1), format_scalar(r2)],
                          "reason": "minimal polynomial does not divide (x-r1)(x-r2)"}
    k1 = n - echelon([dict(enumerate(row)) for row in A1], n).rank
    eig = [r1] * k1 + [r2] * (n - k1)
    return PASS, eig, None


def _fmt_matrix(M):
    return [[format_scalar(x) for x in row] for row in M]


def check_claim_identity(tower: Tower, L: DegreeShiftMap, r_max: int | None = None):
    """``L_{E^r.X}`` for ``X = Ebar.(E.Ebar)`` after normalising ``E = E_n`` to ``a(E) = 1``.

    Expected value ``r(4p+r+1)/2 E^{r-1}.X + (2 conj(p)+1) E^{r+1}.Ebar`` where
    ``L_{E|Ebar} = p Ebar``; ``p`` is real for real ``L``.
    Returns ``(status, rho, witness)``; vacuous when the normalisation is impossible.
    """
    s = tower.s
    calc = LevelOneCalculus(tower, L)
    r_max = s.depth if r_max is None else r_max
    en = s.holomorphic[-1]
    v = calc.L_bar({en: 1}, {en: 1})
    if set(v) - {en} or not v.get(en, 0):
        return VACUOUS, None, None
    lam = v[en]
    E = Element({en: 1}) * div(1, lam)
    Eb = s.conjugate(E)
    w = calc.L_bar(E, Eb)
    k0 = next(iter(Eb))
    rho = div(w.get(k0, 0), Eb[k0])
    if w != Eb * rho:
        return VACUOUS, None, None
    X = s.bracket(Eb, s.bracket(E, Eb))
    for r in range(0, r_max + 1):
        arg = calc.ad_pow(E, r, X)
        lhs = calc.L_m(arg) if arg else Element()
        rhs = calc.ad_pow(E, r + 1, Eb) * (2 * conj(rho) + 1)
        if r >= 1:
            rhs = rhs + calc.ad_pow(E, r - 1, X) * (Fraction(r, 2) * (4 * rho + r + 1))
        if lhs != rhs:
            return FAIL, rho, {"r": r, "rho": format_scalar(rho), "E": _fmt(s, E),
                               "lhs": _fmt(s, lhs), "rhs": _fmt(s, rhs)}
    return PASS, rho, None


def corrupt(L: DegreeShiftMap, b: int, t: int, delta=1) -> DegreeShiftMap:
    """Copy of ``L`` with one coordinate of ``L(b)`` shifted by ``delta``."""
    flat = L.flat()
    flat[(b, t)] = flat.get((b, t), 0) + delta
    return DegreeShiftMap.from_flat(L.shift, flat)


# -- reports --------------------------------------------------------------------

@dataclass
class VerificationReport:
    n: int
    mu: int
    ideal: list[str]
    m_dims: list[int]
    m_blocks: dict
    complex_dims: list[int]
    real_dims: list[int]
    stabilized_at: int | None
    prolongation_status: str
    recheck_dim: int | None
    checks: list[CheckResult] = field(default_factory=list)
    bases: list | None = None
    timings: list[float] = field(default_factory=list)

    @property
    def g1_real_dim(self) -> int:
        return self.real_dims[1] if len(self.real_dims) > 1 else 0

    @property
    def theorem_hypotheses(self) -> bool:
        return self.mu >= 4

    @property
    def theorem_status(self) -> str:
        if not self.theorem_hypotheses:
            return "outside theorem hypotheses"
        return "pass" if self.g1_real_dim == 0 else "FAIL"

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        out = {
            "instance": {"n": self.n, "mu": self.mu, "ideal": list(self.ideal)},
            "hall_order": "degree-major; within a degree (degree of left, index of left, index of right)",
            "m_dims": list(self.m_dims),
            "m_total_dim": sum(self.m_dims),
            "m_blocks": self.m_blocks,
            "g_dims_complex": list(self.complex_dims),
            "g_dims_real": list(self.real_dims),
            "g1_real_dim": self.g1_real_dim,
            "aut_real_dim": sum(self.m_dims) + sum(self.real_dims),
            "stabilized_at": self.stabilized_at,
            "prolongation_status": self.prolongation_status,
            "recheck_dim": self.recheck_dim,
            "theorem_status": self.theorem_status,
            "all_checks_pass": self.passed,
            "checks": {c.name: c.to_dict() for c in self.checks},
        }
        if self.bases is not None:
            out["bases"] = self.bases
        return out


def _identity_hypotheses(s: CRSymbol) -> bool:
    return s.depth >= 4 or (s.depth == 3 and (s.n == 1 or not s.lowest_ideal_basis))


def verify_main_theorem(n: int, mu: int, ideal_gens=(), max_level: int = DEFAULT_MAX_LEVEL,
                        cap: int | None = None, emit_bases: bool = False) -> VerificationReport:
    """Build the symbol, prolong it and run every structural and identity check."""
    from .cr_universal import btype_key, type_blocks

    s = make_symbol(n, mu, list(ideal_gens), cap)
    res = prolong_until_zero(s, max_level)
    tower = res.tower
    u = s.universal
    blocks = {}
    for k in range(1, mu):
        blocks[str(k)] = dict(type_blocks(u, k))
    top = {}
    for i in s.by_degree[mu]:
        key = btype_key(s.btype(i), n)
        top[key] = top.get(key, 0) + 1
    blocks[str(mu)] = top
    rep = VerificationReport(
        n=n, mu=mu, ideal=[s.universal.format(g) for g in s.ideal_gens],
        m_dims=s.dims(), m_blocks=blocks,
        complex_dims=res.complex_dims, real_dims=res.real_dims,
        stabilized_at=res.stabilized_at, prolongation_status=res.status,
        recheck_dim=res.recheck_dim, timings=res.seconds)
    add = rep.checks.append

    # symbol structure
    gap = _fundamental_gap(s)
    add(CheckResult("symbol.fundamental", FAIL if gap else PASS, witness=gap))
    bad = integrability_violations(s)
    add(CheckResult("symbol.integrability", FAIL if bad else PASS,
                    witness={"pairs": [list(p) for p in bad[:5]]} if bad else None))
    bad = lie_axiom_violations(s)
    add(CheckResult("symbol.lie_axioms", FAIL if bad else PASS,
                    witness={"violations": bad} if bad else None))
    add(_conjugation_check(s))
    short = {str(k): [len(s.by_degree[k]), len(u.by_degree[k])] for k in range(1, mu)
             if len(s.by_degree[k]) != len(u.by_degree[k])}
    add(CheckResult("symbol.total_nondegeneracy", FAIL if short else PASS,
                    witness={"degree: [dim, universal dim]": short} if short else None))

    # prolongation structure
    levels = tower.levels[: len(res.real_dims)]
    wit = None
    count = 0
    for lv in levels:
        for X in lv.basis + lv.real_basis:
            count += 1
            v = tower.identity_violation(X)
            if v is not None:
                wit = {"level": lv.shift, "Y": v["Y"], "Z": v["Z"],
                       "lhs": str({k: format_scalar(c) for k, c in v["lhs"].items()}),
                       "rhs": str({k: format_scalar(c) for k, c in v["rhs"].items()})}
                break
        if wit:
            break
    add(CheckResult("prolongation.defining_identity", FAIL if wit else PASS,
                    f"{count} basis maps substituted on all basis pairs", wit))
    det = [lv.shift for lv in levels if not determined_by_degree_one(tower, lv.basis)]
    add(CheckResult("prolongation.determined_by_degree_one", FAIL if det else PASS,
                    witness={"levels": det} if det else None))
    wit = None
    for X in tower.levels[0].basis:
        if not tower.preserves_split(X):
            wit = {"map": format_map(tower, X), "reason": "mixes the two halves of degree -1"}
            break
    if wit is None and not in_level_span(tower, 0, grading_derivation(s)):
        wit = {"reason": "grading derivation not in level 0"}
    add(CheckResult("prolongation.level0_split_and_grading", FAIL if wit else PASS, witness=wit))
    unfixed = [{"level": lv.shift, "map": format_map(tower, X)}
               for lv in levels for X in lv.real_basis if tower.sigma_map(X) != X][:1]
    add(CheckResult("prolongation.reality", FAIL if unfixed else PASS,
                    witness=unfixed[0] if unfixed else None))
    if len(tower.levels) > 1:
        add(_lemma_reality_check(tower))
    if res.stabilized_at is None:
        add(CheckResult("prolongation.zero_persists", VACUOUS, "no zero level reached"))
    else:
        add(CheckResult("prolongation.zero_persists", PASS if res.recheck_dim == 0 else FAIL,
                        f"level {res.stabilized_at + 1} recomputed: dim {res.recheck_dim}",
                        None if res.recheck_dim == 0 else {"level": res.stabilized_at + 1,
                                                           "dim": res.recheck_dim}))

    # theorem
    if rep.theorem_hypotheses:
        add(CheckResult("theorem.g1_vanishes", PASS if rep.g1_real_dim == 0 else FAIL,
                        f"dim g1 = {rep.g1_real_dim}",
                        None if rep.g1_real_dim == 0 else {"g1_real_dim": rep.g1_real_dim}))
    else:
        add(CheckResult("theorem.g1_vanishes", VACUOUS,
                        f"outside theorem hypotheses; dim g1 = {rep.g1_real_dim}"))
    bound = 2 * n * n
    add(CheckResult("theorem.g0_bound", PASS if res.real_dims[0] <= bound else FAIL,
                    f"dim g0 = {res.real_dims[0]} <= {bound}",
                    None if res.real_dims[0] <= bound else {"g0_real_dim": res.real_dims[0]}))

    # identities on level 1
    for c in level_one_identity_checks(tower, res.real_dims):
        add(c)

    if emit_bases:
        rep.bases = [{"level": lv.shift,
                      "complex": [format_map(tower, X) for X in lv.basis],
                      "real": [format_map(tower, X) for X in lv.real_basis]} for lv in levels]
    return rep


def _fundamental_gap(s: CRSymbol):
    for p in range(1, s.depth):
        vecs = [s.basis_bracket(b, g) for b in s.by_degree[p] for g in s.by_degree[1]]
        r = echelon(vecs, s.dim).rank
        if r != len(s.by_degree[p + 1]):
            return {"degree": p + 1, "rank of brackets": r, "dim": len(s.by_degree[p + 1])}
    return None


def _conjugation_check(s: CRSymbol) -> CheckResult:
    for i in range(s.dim):
        if s.conjugate(s.conjugate({i: 1})) != Element({i: 1}):
            return CheckResult("symbol.conjugation", FAIL, "not an involution",
                               {"x": s.label(i)})
    for i in range(s.dim):
        for j in range(i + 1, s.dim):
            lhs = s.conjugate(s.basis_bracket(i, j))
            rhs = s.bracket(s.conjugate({i: 1}), s.conjugate({j: 1}))
            if lhs != rhs:
                return CheckResult("symbol.conjugation", FAIL, "not a homomorphism",
                                   {"x": s.label(i), "y": s.label(j), "lhs": s.format(lhs),
                                    "rhs": s.format(rhs)})
    return CheckResult("symbol.conjugation", PASS)


def lemma_reality_violation(tower: Tower, L: DegreeShiftMap):
    """``conj(L(W)(Z)) == L(conj W)(conj Z)`` for ``W`` of degree -1 and all basis ``Z``."""
    s = tower.s
    for w in s.by_degree[1]:
        lw = tower.apply(L, {w: 1})
        lcw = tower.apply(L, s.conjugate({w: 1}))
        for z in range(s.dim):
            lhs = s.conjugate(tower.bracket(0, lw, {z: 1}))
            rhs = Element(tower.bracket(0, lcw, s.conjugate({z: 1})))
            if lhs != rhs:
                return {"W": s.label(w), "Z": s.label(z), "lhs": s.format(lhs), "rhs": s.format(rhs)}
    return None


def _lemma_reality_check(tower: Tower) -> CheckResult:
    real = tower.levels[1].real_basis
    if not real:
        return CheckResult("prolongation.level1_reality_identity", VACUOUS, "level 1 is zero")
    for L in real:
        v = lemma_reality_violation(tower, L)
        if v:
            return CheckResult("prolongation.level1_reality_identity", FAIL, "", v)
    return CheckResult("prolongation.level1_reality_identity", PASS,
                       f"{len(real)} real basis maps")


def level_one_identity_checks(tower: Tower, real_dims) -> list[CheckResult]:
    s = tower.s
    note = "" if _identity_hypotheses(s) else "outside the hypotheses of the level-one identities; "
    if len(tower.levels) < 2 or not tower.levels[1].basis:
        return [CheckResult(name, VACUOUS, "level 1 is zero")
                for name in ("identities.bracket_expansion", "identities.quadratic",
                             "identities.eigenstructure", "identities.claim")]
    out = []
    complex_basis = tower.levels[1].basis
    real_basis = tower.levels[1].real_basis
    total = 0
    for L in complex_basis:
        status, wit, count = bracket_identity_suite(tower, L, s.depth + 1)
        total += count
        if status == FAIL:
            out.append(CheckResult("identities.bracket_expansion", FAIL, note, wit))
            break
    else:
        out.append(CheckResult("identities.bracket_expansion", PASS,
                               f"{note}{total} cases, r <= {s.depth + 1}"))
    alphas = []
    for L in real_basis:
        status, alpha, wit = check_lemma_quadratic(tower, L)
        if status == FAIL:
            out.append(CheckResult("identities.quadratic", FAIL, note, wit))
            break
        alphas.append([format_scalar(a) for a in alpha])
    else:
        out.append(CheckResult("identities.quadratic", PASS, f"{note}alpha = {alphas}"))
    eigs = []
    failed = None
    for L in real_basis:
        for e in s.holomorphic:
            status, eig, wit = check_eigenstructure(tower, L, {e: 1})
            if status == FAIL:
                failed = wit
                break
            eigs.append([format_scalar(x) for x in eig])
        if failed:
            break
    out.append(CheckResult("identities.eigenstructure", FAIL if failed else PASS,
                           note if failed else f"{note}eigenvalues {eigs}", failed))
    rhos = []
    status = VACUOUS
    for L in real_basis:
        st, rho, wit = check_claim_identity(tower, L, s.depth + 1)
        if st == FAIL:
            out.append(CheckResult("identities.claim", FAIL, note, wit))
            break
        if st == PASS:
            status = PASS
            rhos.append(format_scalar(rho))
    else:
        out.append(CheckResult("identities.claim", status,
                               f"{note}rho = {rhos}" if rhos else "normalisation not achievable"))
    return out
