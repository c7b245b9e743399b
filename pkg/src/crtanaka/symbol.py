"""Totally nondegenerate CR symbols: quotients of the universal CR algebra
by an ideal sitting entirely in the lowest degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .algebra import Element, GradedAlgebra, QuotientAlgebra, add_scaled
from .cr_universal import UniversalCRAlgebra, build_universal_cr
from .errors import IdealError
from .exact import I, conj, echelon, imag_part, real_part, simplify, solve_in_span
from .exact import _integral_row


class CRSymbol(QuotientAlgebra):
    """``m = U_J / i`` with ``i`` inside the degree ``-depth`` component."""

    def __init__(self, universal: UniversalCRAlgebra, ideal_gens: Sequence[Mapping] = ()):
        mu = universal.depth
        if mu < 2:
            raise IdealError("depth must be at least 2")
        gens = []
        for g in ideal_gens:
            g = Element(g)
            if not g:
                continue
            if universal.degree_of(g) != mu:
                raise IdealError("ideal not in lowest degree")
            gens.append(g)
        span = echelon([g.terms() for g in gens], universal.dim)
        for g in gens:
            if not span.contains(universal.conjugate(g).terms()):
                raise IdealError("ideal not real")
        if gens and span.rank == len(universal.by_degree[mu]):
            raise IdealError("depth collapses below mu")
        self.universal = universal
        self.lowest_ideal_basis = [Element(r) for r in span.normalized_rows().values()]
        self.lowest_ideal_basis.sort(key=lambda e: min(e))
        self.ideal_gens = gens
        super().__init__(universal, {mu: [g.terms() for g in gens]})
        self._conj_cache: dict[int, dict] = {}

    @property
    def n(self) -> int:
        return self.universal.n

    @property
    def mu(self) -> int:
        return self.depth

    @property
    def holomorphic(self) -> list[int]:
        return self.by_degree[1][: self.n]

    @property
    def antiholomorphic(self) -> list[int]:
        return self.by_degree[1][self.n:]

    def btype(self, i: int) -> tuple:
        return self.universal.btype(self.rep[i])

    def element(self, text_or_terms) -> Element:
        return self.project(self.universal.element(text_or_terms))

    def conjugate_basis(self, i: int) -> dict:
        hit = self._conj_cache.get(i)
        if hit is None:
            hit = self.project(self.universal.conjugate_basis(self.rep[i])).terms()
            self._conj_cache[i] = hit
        return hit

    def conj_matrix(self, p: int) -> dict[int, dict]:
        """Columns of the conjugation on degree ``p``: ``{i: conj(b_i)}``."""
        return {i: self.conjugate_basis(i) for i in self.by_degree[p]}

    def conjugate(self, x: Mapping) -> Element:
        acc: dict = {}
        for i, v in x.items():
            add_scaled(acc, self.conjugate_basis(i), conj(v))
        return Element._wrap(acc)


def build_symbol(u: UniversalCRAlgebra, ideal_gens=()) -> CRSymbol:
    """Quotient of ``u`` by the span of ``ideal_gens`` (elements or text)."""
    gens = [u.element(g) if isinstance(g, str) else g for g in ideal_gens]
    return CRSymbol(u, gens)


def make_symbol(n: int, mu: int, ideal=(), cap=None) -> CRSymbol:
    """Symbol with ``n`` holomorphic generators, depth ``mu`` and the given lowest-degree ideal."""
    if mu <= 1:
        raise IdealError("mu out of range")
    u = build_universal_cr(n, mu) if cap is None else build_universal_cr(n, mu, cap)
    return build_symbol(u, ideal)


def conjugate(x: Mapping, s: CRSymbol) -> Element:
    return s.conjugate(x)


# -- real form --------------------------------------------------------------

def _realify(v: Mapping, offset: int) -> dict:
    out = {}
    for c, x in v.items():
        a, b = real_part(x), imag_part(x)
        if a:
            out[c] = a
        if b:
            out[offset + c] = b
    return out


def _complexify(v: Mapping, offset: int, cols) -> dict:
    out = {}
    for c in cols:
        z = simplify(v.get(c, 0) + I * v.get(offset + c, 0))
        if z:
            out[c] = z
    return out


@dataclass
class RealForm:
    """Conjugation-fixed basis of a symbol and its rational structure constants.

    ``basis[a]`` is a complex coordinate vector in the symbol; the real
    algebra ``algebra`` has basis index ``a`` for it.
    """

    symbol: CRSymbol
    basis: list[Element]
    degrees: list[int]
    table: dict = field(default_factory=dict)

    @property
    def algebra(self) -> GradedAlgebra:
        return GradedAlgebra(self.degrees, self.symbol.depth, table=self.table)

    def dims(self) -> list[int]:
        return [self.degrees.count(p) for p in range(1, self.symbol.depth + 1)]

    def to_complex(self, coords: Mapping) -> Element:
        acc: dict = {}
        for a, q in coords.items():
            add_scaled(acc, self.basis[a], q)
        return Element._wrap(acc)


def real_form(s: CRSymbol) -> RealForm:
    off = s.dim
    basis: list[Element] = []
    degrees: list[int] = []
    per_degree: dict[int, list[int]] = {}
    for p in range(1, s.depth + 1):
        ech = echelon([], 2 * off)
        per_degree[p] = []
        for i in s.by_degree[p]:
            c = s.conjugate_basis(i)
            e = {i: 1}
            plus = add_scaled(dict(e), c, 1)
            minus = add_scaled(dict(e), c, -1)
            for cand in (plus, {k: I * v for k, v in minus.items()}):
                rv = _realify(cand, off)
                if rv and ech.add(rv):
                    prim = _integral_row(rv)
                    per_degree[p].append(len(basis))
                    basis.append(Element(_complexify(prim, off, sorted(s.by_degree[p]))))
                    degrees.append(p)
    table = {}
    real_vecs = [_realify(b, off) for b in basis]
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            p = degrees[a] + degrees[b]
            if p > s.depth:
                continue
            br = s.bracket(basis[a], basis[b])
            if not br:
                continue
            idx = per_degree[p]
            coords = solve_in_span([real_vecs[k] for k in idx], _realify(br, off))
            if coords is None:
                raise ArithmeticError("bracket of real vectors is not real")
            terms = {idx[k]: q for k, q in enumerate(coords) if q}
            if terms:
                table[(a, b)] = terms
    return RealForm(s, basis, degrees, table)


# -- nondegeneracy --------------------------------------------------------

def check_fundamental(alg: GradedAlgebra) -> bool:
    """Whether ``[m^{-i}, m^{-1}] = m^{-i-1}`` for every ``i``, by exact rank."""
    for p in range(1, alg.depth):
        vecs = [alg.basis_bracket(b, g) for b in alg.by_degree[p] for g in alg.by_degree[1]]
        if echelon(vecs, alg.dim).rank != len(alg.by_degree[p + 1]):
            return False
    return True


def integrability_violations(s: CRSymbol) -> list[tuple[str, str]]:
    bad = []
    for half in (s.holomorphic, s.antiholomorphic):
        for a in half:
            for b in half:
                if s.basis_bracket(a, b):
                    bad.append((s.label(a), s.label(b)))
    return bad


def levi_kernel_dim(s: GradedAlgebra, x0: Mapping, k: int) -> int:
    cols = s.ad_matrix(x0, k)
    return len(cols) - echelon(cols.values(), s.dim).rank


def levi_kernel_profile(s: GradedAlgebra, x0: Mapping) -> list[int]:
    """``dim ker(ad_x0 : m^{-k} -> m^{-k-1})`` for ``k = 1 .. depth-1``."""
    if not Element(x0):
        raise ValueError("x0 must be nonzero")
    if s.degree_of(x0) != 1:
        raise ValueError("x0 must have degree -1")
    return [levi_kernel_dim(s, x0, k) for k in range(1, s.depth)]
