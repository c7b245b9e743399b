"""Sparse elements and negatively graded nilpotent Lie algebras.

Degrees are stored as positive integers: a basis vector of degree ``p`` lives
in the component of degree ``-p``.  Basis vectors are numbered globally,
degree by degree, so an index already determines its degree.
"""

from __future__ import annotations

from collections.abc import Mapping
from itertools import combinations

from .exact import conj, simplify
from .syntax import format_terms


class Element(Mapping):
    """Immutable sparse linear combination ``{basis index: coefficient}``."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        if terms is None:
            self._terms = {}
        else:
            items = terms.items() if isinstance(terms, Mapping) else terms
            self._terms = {i: simplify(c) for i, c in items if c}

    @classmethod
    def _wrap(cls, d: dict) -> Element:
        e = cls.__new__(cls)
        e._terms = d
        return e

    @classmethod
    def basis(cls, i: int, coeff=1) -> Element:
        return cls._wrap({i: coeff}) if coeff else cls()

    def __getitem__(self, i):
        return self._terms[i]

    def get(self, i, default=0):
        return self._terms.get(i, default)

    def __iter__(self):
        return iter(sorted(self._terms))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def terms(self) -> dict:
        return dict(self._terms)

    def __add__(self, other):
        if not isinstance(other, Mapping):
            return NotImplemented
        return Element._wrap(add_scaled(dict(self._terms), other, 1))

    def __sub__(self, other):
        if not isinstance(other, Mapping):
            return NotImplemented
        return Element._wrap(add_scaled(dict(self._terms), other, -1))

    def __neg__(self):
        return Element._wrap({i: -c for i, c in self._terms.items()})

    def __mul__(self, scalar):
        if isinstance(scalar, Mapping):
            return NotImplemented
        if not scalar:
            return Element()
        return Element._wrap({i: simplify(c * scalar) for i, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return self._terms == {i: c for i, c in other.items() if c}
        if other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None

    def conjugate_coefficients(self) -> Element:
        return Element._wrap({i: conj(c) for i, c in self._terms.items()})

    def __repr__(self):
        return f"Element({dict(sorted(self._terms.items()))!r})"


def add_scaled(acc: dict, terms: Mapping, scale) -> dict:
    """In place ``acc += scale * terms``; drops cancelled entries."""
    for i, c in terms.items():
        v = acc.get(i, 0) + scale * c
        if v:
            acc[i] = simplify(v)
        else:
            acc.pop(i, None)
    return acc


class GradedAlgebra:
    """A nilpotent Lie algebra ``m^{-1} + ... + m^{-depth}`` with sparse structure constants.

    Subclasses compute brackets of basis vectors lazily by overriding
    :meth:`_compute_bracket`; the plain class reads them from ``table``, a
    mapping ``(i, j) -> {k: c}`` that need only contain one orientation of
    each pair.
    """

    def __init__(self, degrees, depth: int, labels=None, table=None):
        degrees = list(degrees)
        if any(b < a for a, b in zip(degrees, degrees[1:])):
            raise ValueError("basis must be listed degree by degree")
        if degrees and (degrees[0] < 1 or degrees[-1] > depth):
            raise ValueError("degrees must lie in 1..depth")
        self.depth = depth
        self.degrees = tuple(degrees)
        self.dim = len(degrees)
        self.by_degree = {p: [] for p in range(1, depth + 1)}
        for i, p in enumerate(degrees):
            self.by_degree[p].append(i)
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(self.dim)]
        self._table = {}
        self._given = {}
        for (i, j), v in (table or {}).items():
            terms = {k: simplify(c) for k, c in v.items() if c}
            self._given[(i, j)] = terms
            self._given[(j, i)] = {k: -c for k, c in terms.items()}

    # -- structure constants -------------------------------------------

    def _compute_bracket(self, i: int, j: int) -> dict:
        return self._given.get((i, j), {})

    def basis_bracket(self, i: int, j: int) -> dict:
        """``[b_i, b_j]`` as a read-only dict (do not mutate)."""
        if i == j or self.degrees[i] + self.degrees[j] > self.depth:
            return {}
        key = (i, j)
        hit = self._table.get(key)
        if hit is None:
            if i > j:
                hit = {k: -c for k, c in self.basis_bracket(j, i).items()}
            else:
                hit = self._compute_bracket(i, j)
            self._table[key] = hit
        return hit

    def structure_constants(self) -> dict:
        """All nonzero ``(i, j) -> {k: c}`` with ``i < j``."""
        out = {}
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                b = self.basis_bracket(i, j)
                if b:
                    out[(i, j)] = dict(b)
        return out

    def bracket(self, x: Mapping, y: Mapping) -> Element:
        acc: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                t = self.basis_bracket(i, j)
                if t:
                    add_scaled(acc, t, a * b)
        return Element._wrap(acc)

    # -- convenience -----------------------------------------------------

    def dims(self) -> list[int]:
        return [len(self.by_degree[p]) for p in range(1, self.depth + 1)]

    def basis(self, i: int) -> Element:
        return Element.basis(i)

    def component(self, x: Mapping, p: int) -> Element:
        return Element({i: c for i, c in x.items() if self.degrees[i] == p})

    def degree_of(self, x: Mapping) -> int | None:
        """The degree if ``x`` is homogeneous and nonzero, else None."""
        ds = {self.degrees[i] for i, c in x.items() if c}
        return ds.pop() if len(ds) == 1 else None

    def label(self, i: int) -> str:
        return str(self.labels[i])

    def format(self, x: Mapping) -> str:
        return format_terms([(x[i], self.label(i)) for i in sorted(x) if x[i]])

    def ad_matrix(self, x: Mapping, p: int) -> dict:
        """Column map of ``ad_x`` restricted to degree ``p``: ``{i: [x, b_i]}``."""
        return {i: self.bracket(x, {i: 1}).terms() for i in self.by_degree[p]}


def lie_axiom_violations(alg: GradedAlgebra, limit: int = 5) -> list[str]:
    """Antisymmetry and Jacobi on basis pairs/triples; returns up to ``limit`` witnesses.

    Triples whose degrees add up to more than the depth are zero on both
    sides by truncation and are skipped.
    """
    bad = []
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            a = alg.basis_bracket(i, j)
            b = alg.basis_bracket(j, i)
            if Element(a) != -Element(b):
                bad.append(f"antisymmetry fails on ({alg.label(i)}, {alg.label(j)})")
                if len(bad) >= limit:
                    return bad
    deg = alg.degrees
    for i, j, k in combinations(range(alg.dim), 3):
        if deg[i] + deg[j] + deg[k] > alg.depth:
            continue
        x, y, z = {i: 1}, {j: 1}, {k: 1}
        s = (alg.bracket(alg.bracket(x, y), z) + alg.bracket(alg.bracket(y, z), x)
             + alg.bracket(alg.bracket(z, x), y))
        if s:
            bad.append(f"Jacobi fails on ({alg.label(i)}, {alg.label(j)}, {alg.label(k)})")
            if len(bad) >= limit:
                return bad
    return bad


class QuotientAlgebra(GradedAlgebra):
    """Quotient of ``parent`` by a graded ideal given through spanning vectors.

    ``relations`` maps a degree to vectors (dicts over parent indices) that
    span the ideal in that degree.  Each degree is row reduced; pivot columns
    are eliminated and the remaining parent basis vectors, in parent order,
    become the quotient basis.  ``priority`` (parent index -> sort key) steers
    which columns are used as pivots.  The caller is responsible for the
    span really being an ideal.
    """

    def __init__(self, parent: GradedAlgebra, relations, priority=None, depth=None):
        from .exact import echelon

        depth = parent.depth if depth is None else depth
        self.parent = parent
        self._proj: dict[int, dict] = {}
        self.relation_rank = {}
        reps = []
        for p in range(1, depth + 1):
            cols = parent.by_degree[p]
            ech = echelon(relations.get(p, ()), parent.dim, priority)
            self.relation_rank[p] = ech.rank
            pivots = ech.normalized_rows()
            for c in cols:
                if c not in pivots:
                    reps.append(c)
            for pc, row in pivots.items():
                self._proj[pc] = {c: -v for c, v in row.items() if c != pc}
        self.rep = reps
        self.parent_to_quot = {c: i for i, c in enumerate(reps)}
        self._proj = {pc: {self.parent_to_quot[c]: v for c, v in row.items()}
                      for pc, row in self._proj.items()}
        super().__init__([parent.degrees[c] for c in reps], depth,
                         [parent.labels[c] for c in reps])

    def project(self, x: Mapping) -> Element:
        acc: dict = {}
        for c, v in x.items():
            if self.parent.degrees[c] > self.depth:
                continue
            q = self.parent_to_quot.get(c)
            if q is not None:
                add_scaled(acc, {q: 1}, v)
            else:
                add_scaled(acc, self._proj.get(c, {}), v)
        return Element._wrap(acc)

    def lift(self, x: Mapping) -> Element:
        return Element({self.rep[i]: c for i, c in x.items()})

    def _compute_bracket(self, i: int, j: int) -> dict:
        return self.project(self.parent.basis_bracket(self.rep[i], self.rep[j])).terms()
