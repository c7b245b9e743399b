"""Tanaka prolongation of a CR symbol.

Level ``l`` consists of degree-``l`` maps ``X`` on ``m`` with
``X([Y, Z]) = [X(Y), Z] + [Y, X(Z)]``.  For a basis vector ``b`` of degree
``-p`` the value ``X(b)`` lies in *grade* ``l - p``: an element of ``m`` when
the grade is negative, otherwise an element of an earlier level, stored by
its coordinates in that level's basis.  Brackets of a level element ``A``
with ``z`` in ``m`` are ``A(z)``.

Level 0 is restricted to maps preserving both halves of ``m^{-1}`` (the
complexification of the real level 0).  Real forms of all levels are the
fixed points of ``X -> conj o X o conj``, obtained by realification.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping

from .algebra import Element, add_scaled
from .exact import (SparseMatrix, conj, echelon, kernel_sparse, simplify,
                    solve_in_span, solve_semilinear_fixed_points)
from .symbol import CRSymbol
from .syntax import format_terms

DEFAULT_MAX_LEVEL = 4


@dataclass(frozen=True)
class DegreeShiftMap:
    """A map of degree ``shift``: ``action[b]`` holds the coordinates of ``X(b)``."""

    shift: int
    action: Mapping[int, Mapping[int, object]]

    def image(self, b: int) -> dict:
        return dict(self.action.get(b, {}))

    def flat(self) -> dict:
        return {(b, t): v for b, img in self.action.items() for t, v in img.items() if v}

    @staticmethod
    def from_flat(shift: int, flat: Mapping) -> DegreeShiftMap:
        action: dict[int, dict] = {}
        for (b, t), v in flat.items():
            if v:
                action.setdefault(b, {})[t] = simplify(v)
        return DegreeShiftMap(shift, action)

    @staticmethod
    def combine(shift: int, coeffs, maps) -> DegreeShiftMap:
        acc: dict = {}
        for c, m in zip(coeffs, maps):
            if c:
                add_scaled(acc, m.flat(), c)
        return DegreeShiftMap.from_flat(shift, acc)

    def __add__(self, other):
        return DegreeShiftMap.combine(self.shift, (1, 1), (self, other))

    def __sub__(self, other):
        return DegreeShiftMap.combine(self.shift, (1, -1), (self, other))

    def __mul__(self, c):
        return DegreeShiftMap.combine(self.shift, (c,), (self,))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DegreeShiftMap):
            return NotImplemented
        return self.shift == other.shift and self.flat() == other.flat()

    def __bool__(self):
        return bool(self.flat())


@dataclass
class Level:
    shift: int
    basis: list[DegreeShiftMap]
    real_basis: list[DegreeShiftMap] = field(default_factory=list)
    sigma: SparseMatrix | None = None  # sigma(sum c_j X_j) = sum (sigma conj(c))_i X_i
    unknowns: int = 0
    rows: int = 0
    all_pairs_fallback: bool = False
    seconds: float = 0.0

    def sigma_columns(self) -> dict[int, dict]:
        cols: dict[int, dict] = {}
        for i, j, v in self.sigma.entries():
            cols.setdefault(j, {})[i] = v
        return cols

    @property
    def complex_dim(self) -> int:
        return len(self.basis)

    @property
    def real_dim(self) -> int:
        return len(self.real_basis)


class Tower:
    """A symbol together with the prolongation levels computed so far."""

    def __init__(self, s: CRSymbol):
        self.s = s
        self.levels: list[Level] = []

    # -- grades ----------------------------------------------------------

    def grade_coords(self, g: int) -> list[int]:
        if g < 0:
            return self.s.by_degree.get(-g, []) if -g <= self.s.depth else []
        return list(range(len(self.levels[g].basis)))

    def act(self, g: int, t: int, z: int) -> Mapping:
        """Bracket of the ``t``-th basis vector of grade ``g`` with the basis vector ``z`` of m."""
        if g < 0:
            return self.s.basis_bracket(t, z)
        return self.levels[g].basis[t].action.get(z, {})

    def bracket(self, g: int, v: Mapping, z: Mapping) -> dict:
        """``[v, z]`` for ``v`` of grade ``g`` and ``z`` in m (result coordinates)."""
        acc: dict = {}
        for t, a in v.items():
            for w, b in z.items():
                add_scaled(acc, self.act(g, t, w), a * b)
        return acc

    def apply(self, X: DegreeShiftMap, z: Mapping) -> dict:
        acc: dict = {}
        for w, b in z.items():
            add_scaled(acc, X.action.get(w, {}), b)
        return acc

    def conjugate_grade(self, g: int, v: Mapping) -> dict:
        if g < 0:
            return self.s.conjugate(v).terms()
        columns = self.levels[g].sigma_columns()
        acc: dict = {}
        for t, c in v.items():
            add_scaled(acc, columns.get(t, {}), conj(c))
        return acc

    def sigma_map(self, X: DegreeShiftMap) -> DegreeShiftMap:
        """``conj o X o conj``, the real structure on level ``X.shift``."""
        s = self.s
        action = {}
        for b in range(s.dim):
            g = X.shift - s.degrees[b]
            if g < 0 and -g > s.depth:
                continue
            val = self.apply(X, s.conjugate_basis(b))
            if val:
                img = self.conjugate_grade(g, val)
                if img:
                    action[b] = img
        return DegreeShiftMap(X.shift, action)

    # -- checks ----------------------------------------------------------

    def identity_violation(self, X: DegreeShiftMap, pairs=None):
        """First pair ``(Y, Z)`` where the defining identity fails, with both sides."""
        s = self.s
        ell = X.shift
        if pairs is None:
            pairs = ((y, z) for y in range(s.dim) for z in range(s.dim))
        for y, z in pairs:
            if ell - s.degrees[y] - s.degrees[z] < -s.depth:
                continue
            lhs = self.apply(X, s.basis_bracket(y, z))
            gy = ell - s.degrees[y]
            gz = ell - s.degrees[z]
            rhs = add_scaled(self.bracket(gy, X.action.get(y, {}), {z: 1}),
                             self.bracket(gz, X.action.get(z, {}), {y: 1}), -1)
            if Element(lhs) != Element(rhs):
                return {"Y": s.label(y), "Z": s.label(z), "lhs": lhs, "rhs": rhs}
        return None

    def preserves_split(self, X: DegreeShiftMap) -> bool:
        s = self.s
        hol, anti = set(s.holomorphic), set(s.antiholomorphic)
        for y in s.holomorphic:
            if set(X.action.get(y, {})) & anti:
                return False
        for y in s.antiholomorphic:
            if set(X.action.get(y, {})) & hol:
                return False
        return True


# -- assembly ---------------------------------------------------------------

def _layout(tower: Tower, ell: int):
    s = tower.s
    cols = []
    for b in range(s.dim):
        for t in tower.grade_coords(ell - s.degrees[b]):
            cols.append((b, t))
    return cols, {c: k for k, c in enumerate(cols)}


def _assemble(tower: Tower, ell: int, col_of, all_pairs: bool) -> list[dict]:
    s = tower.s
    ys = range(s.dim) if all_pairs else s.by_degree[1]
    rows = []
    for y in ys:
        gy = ell - s.degrees[y]
        for z in range(s.dim):
            if all_pairs and z < y:
                continue
            g = ell - s.degrees[y] - s.degrees[z]
            coords = tower.grade_coords(g)
            if not coords:
                continue
            gz = ell - s.degrees[z]
            eq: dict[int, dict] = {c: {} for c in coords}
            # X([Y,Z])
            for k, c in s.basis_bracket(y, z).items():
                for t in coords:
                    col = col_of[(k, t)]
                    eq[t][col] = eq[t].get(col, 0) + c
            # - [X(Y), Z]
            for t in tower.grade_coords(gy):
                col = col_of[(y, t)]
                for u, v in tower.act(gy, t, z).items():
                    eq[u][col] = eq[u].get(col, 0) - v
            # - [Y, X(Z)] = + [X(Z), Y]
            for t in tower.grade_coords(gz):
                col = col_of[(z, t)]
                for u, v in tower.act(gz, t, y).items():
                    eq[u][col] = eq[u].get(col, 0) + v
            for t in coords:
                row = {c: v for c, v in eq[t].items() if v}
                if row:
                    rows.append(row)
    if ell == 0:
        hol, anti = s.holomorphic, s.antiholomorphic
        for y in hol:
            for t in anti:
                rows.append({col_of[(y, t)]: 1})
        for y in anti:
            for t in hol:
                rows.append({col_of[(y, t)]: 1})
    return rows


def _solve_level(tower: Tower, ell: int) -> Level:
    start = time.perf_counter()
    cols, col_of = _layout(tower, ell)
    rows = _assemble(tower, ell, col_of, all_pairs=False)
    basis = [DegreeShiftMap.from_flat(ell, {cols[c]: v for c, v in vec.items()})
             for vec in kernel_sparse(rows, len(cols))]
    level = Level(ell, basis, unknowns=len(cols), rows=len(rows))
    tower.levels.append(level)
    if any(tower.identity_violation(X) for X in basis):
        rows = _assemble(tower, ell, col_of, all_pairs=True)
        level.basis = [DegreeShiftMap.from_flat(ell, {cols[c]: v for c, v in vec.items()})
                       for vec in kernel_sparse(rows, len(cols))]
        level.rows = len(rows)
        level.all_pairs_fallback = True
    _real_structure(tower, level)
    level.seconds = time.perf_counter() - start
    return level


def _real_structure(tower: Tower, level: Level):
    d = len(level.basis)
    if not d:
        level.sigma = SparseMatrix(0, 0)
        level.real_basis = []
        return
    flats = [X.flat() for X in level.basis]
    keys = sorted({k for f in flats for k in f})
    pos = {k: i for i, k in enumerate(keys)}
    vecs = [{pos[k]: v for k, v in f.items()} for f in flats]
    entries = []
    for j, X in enumerate(level.basis):
        img = tower.sigma_map(X).flat()
        if any(k not in pos for k in img):
            raise ArithmeticError("level is not stable under conjugation")
        coords = solve_in_span(vecs, {pos[k]: v for k, v in img.items()})
        if coords is None:
            raise ArithmeticError("level is not stable under conjugation")
        entries += [(i, j, c) for i, c in enumerate(coords) if c]
    level.sigma = SparseMatrix(d, d, entries)
    fixed = solve_semilinear_fixed_points(SparseMatrix(0, d), level.sigma)
    level.real_basis = [DegreeShiftMap.combine(level.shift, c, level.basis) for c in fixed]


def compute_g0(s: CRSymbol, tower: Tower | None = None):
    """Complex and real bases of level 0; also returns the tower holding it."""
    tower = tower or Tower(s)
    if tower.levels:
        raise ValueError("tower already has level 0")
    level = _solve_level(tower, 0)
    return level.basis, level.real_basis, tower


def compute_next_level(tower: Tower) -> list[DegreeShiftMap]:
    """Complex basis of the next level, appended to ``tower``."""
    if not tower.levels:
        raise ValueError("compute level 0 first")
    return _solve_level(tower, len(tower.levels)).basis


def reality_restrict(tower: Tower, ell: int) -> list[DegreeShiftMap]:
    """Real basis of level ``ell`` (fixed points of the conjugation)."""
    level = tower.levels[ell]
    if level.sigma is None:
        _real_structure(tower, level)
    return level.real_basis


@dataclass
class ProlongationResult:
    symbol: CRSymbol
    tower: Tower
    complex_dims: list[int]
    real_dims: list[int]
    stabilized_at: int | None
    status: str
    recheck_dim: int | None = None
    seconds: list[float] = field(default_factory=list)

    @property
    def bases(self) -> list[list[DegreeShiftMap]]:
        return [lv.real_basis for lv in self.tower.levels[: len(self.real_dims)]]

    @property
    def complex_bases(self) -> list[list[DegreeShiftMap]]:
        return [lv.basis for lv in self.tower.levels[: len(self.complex_dims)]]


def prolong_until_zero(s: CRSymbol, max_level: int = DEFAULT_MAX_LEVEL) -> ProlongationResult:
    if max_level < 1:
        raise ValueError("max_level must be >= 1")
    tower = Tower(s)
    compute_g0(s, tower)
    stabilized = None
    for ell in range(1, max_level + 1):
        compute_next_level(tower)
        if tower.levels[ell].real_dim == 0:
            stabilized = ell
            break
    n_levels = len(tower.levels)
    recheck = None
    if stabilized is not None:
        compute_next_level(tower)
        recheck = tower.levels[-1].complex_dim
    levels = tower.levels[:n_levels]
    return ProlongationResult(
        symbol=s,
        tower=tower,
        complex_dims=[lv.complex_dim for lv in levels],
        real_dims=[lv.real_dim for lv in levels],
        stabilized_at=stabilized,
        status="stabilized" if stabilized is not None else "not stabilized within max_level",
        recheck_dim=recheck,
        seconds=[lv.seconds for lv in tower.levels],
    )


# -- utilities ----------------------------------------------------------------

def grading_derivation(s: CRSymbol) -> DegreeShiftMap:
    return DegreeShiftMap(0, {b: {b: s.degrees[b]} for b in range(s.dim)})


def in_level_span(tower: Tower, ell: int, X: DegreeShiftMap) -> bool:
    vecs = [Y.flat() for Y in tower.levels[ell].basis]
    keys = sorted({k for f in vecs + [X.flat()] for k in f})
    pos = {k: i for i, k in enumerate(keys)}
    coords = solve_in_span([{pos[k]: v for k, v in f.items()} for f in vecs],
                           {pos[k]: v for k, v in X.flat().items()})
    return coords is not None


def determined_by_degree_one(tower: Tower, basis: list[DegreeShiftMap]) -> bool:
    """Restrictions to ``m^{-1}`` of the given maps are linearly independent."""
    s = tower.s
    deg1 = set(s.by_degree[1])
    keys: dict = {}
    rows = []
    for X in basis:
        r = {}
        for (b, t), v in X.flat().items():
            if b in deg1:
                r[keys.setdefault((b, t), len(keys))] = v
        rows.append(r)
    return echelon(rows, max(len(keys), 1)).rank == len(basis)


def g0_commutator(tower: Tower, A: DegreeShiftMap, B: DegreeShiftMap) -> DegreeShiftMap:
    """``[A, B] = A o B - B o A`` for degree-0 maps."""
    s = tower.s
    action = {}
    for b in range(s.dim):
        ab = tower.apply(A, B.action.get(b, {}))
        ba = tower.apply(B, A.action.get(b, {}))
        v = add_scaled(ab, ba, -1)
        if v:
            action[b] = v
    return DegreeShiftMap(0, action)


def format_map(tower: Tower, X: DegreeShiftMap) -> dict[str, str]:
    """Readable action ``{basis monomial: image}``; level elements print as ``g<l>_<k>``."""
    s = tower.s
    out = {}
    for b in sorted(X.action):
        img = X.action[b]
        g = X.shift - s.degrees[b]
        if g < 0:
            out[s.label(b)] = s.format(img)
        else:
            out[s.label(b)] = format_terms([(img[t], f"g{g}_{t}") for t in sorted(img)])
    return out
