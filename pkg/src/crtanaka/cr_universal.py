"""The universal fundamental CR algebra.

Generators come in conjugate pairs ``E_i <-> F_i``.  The algebra is the
truncated free Lie algebra on ``E1..En, F1..Fn`` modulo the ideals generated
by ``[E_i, E_j]`` and by ``[F_i, F_j]``.

Two Hall bases are built.  In the holomorphic-first one (generators ordered
``E1..En, F1..Fn``) the ``E``-ideal is spanned by the Hall monomials
containing a bracket of two ``E`` leaves, and symmetrically for the
antiholomorphic-first one.  The ``F``-ideal is carried over to the
holomorphic-first basis through the exact change of basis, and the sum of
the two ideals is row reduced degree by degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .algebra import Element, QuotientAlgebra, add_scaled
from .exact import conj, echelon
from .free_lie import DEFAULT_BASIS_CAP, FreeLieAlgebra, HallMonomial
from .syntax import parse_monomial, tree_names

HOLOMORPHIC_FIRST = "holomorphic-first"
ANTIHOLOMORPHIC_FIRST = "antiholomorphic-first"


@dataclass(frozen=True)
class CRGeneratorSplit:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def holomorphic(self) -> tuple:
        return tuple(f"E{i}" for i in range(1, self.n + 1))

    @property
    def antiholomorphic(self) -> tuple:
        return tuple(f"F{i}" for i in range(1, self.n + 1))

    def names(self, which: str = HOLOMORPHIC_FIRST) -> tuple:
        if which == HOLOMORPHIC_FIRST:
            return self.holomorphic + self.antiholomorphic
        if which == ANTIHOLOMORPHIC_FIRST:
            return self.antiholomorphic + self.holomorphic
        raise ValueError(f"unknown order {which!r}")

    def conjugate_name(self, name: str) -> str:
        return ("F" if name[0] == "E" else "E") + name[1:]

    def canonical_name(self, name: str) -> str:
        """Accept ``E``/``F`` as shorthands for ``E1``/``F1`` when n = 1."""
        if self.n == 1 and name in ("E", "F"):
            return name + "1"
        return name


def btype_key(btype: Iterable[int], n: int) -> str:
    """B-type string such as ``"(2,1|0,1)"`` (E-counts, then F-counts)."""
    bt = list(btype)
    return "(" + ",".join(map(str, bt[:n])) + "|" + ",".join(map(str, bt[n:])) + ")"


def adapted_hall_basis(split: CRGeneratorSplit, depth: int, which: str = HOLOMORPHIC_FIRST,
                       cap: int = DEFAULT_BASIS_CAP):
    """Hall basis for the chosen order plus the Hall monomials lying in the
    ideal generated by brackets of two generators from the first half.

    Returns ``(free, {degree: [HallMonomial, ...]})``.
    """
    free = FreeLieAlgebra(split.names(which), depth, cap)
    first = set(range(1, split.n + 1))
    ideal = {p: [] for p in range(1, depth + 1)}
    for m in free.monomials:
        if m.contains_pair(first):
            ideal[m.degree].append(m)
    return free, ideal


def change_of_basis(src: FreeLieAlgebra, dst: FreeLieAlgebra) -> dict[int, dict]:
    """Expansion of every Hall monomial of ``src`` in the Hall basis of ``dst``.

    Both algebras must have the same generator names (in any order).
    """
    out = {}
    for m in src.monomials:
        out[m.index] = dict(dst.rewrite_tree(dst.position_tree(src.name_tree(m.tree()))))
    return out


def ideal_by_brackets(free: FreeLieAlgebra, first_half: set, depth: int) -> dict[int, list[dict]]:
    """Independent spanning sets of the ideal generated by ``[g, h]``, ``g, h`` in ``first_half``.

    Degree 2 is spanned by those brackets, and degree ``k`` by ``[x, v]``
    with ``x`` a generator and ``v`` in a basis of degree ``k - 1``.
    """
    gens = range(len(free.names))
    out = {p: [] for p in range(1, depth + 1)}
    if depth < 2:
        return out
    level = [free.basis_bracket(a, b) for a in first_half for b in first_half if a < b]
    for p in range(2, depth + 1):
        ech = echelon(level, free.dim)
        basis = [dict(r) for r in ech.pivots.values()]
        out[p] = basis
        level = [free.bracket({x: 1}, v).terms() for x in gens for v in basis]
    return out


class UniversalCRAlgebra(QuotientAlgebra):
    """Quotient of the holomorphic-first free algebra by both integrability ideals."""

    def __init__(self, n: int, depth: int, cap: int = DEFAULT_BASIS_CAP):
        if depth < 2:
            raise ValueError("depth must be >= 2")
        self.split = CRGeneratorSplit(n)
        free, ideal10 = adapted_hall_basis(self.split, depth, HOLOMORPHIC_FIRST, cap)
        free_anti, ideal01 = adapted_hall_basis(self.split, depth, ANTIHOLOMORPHIC_FIRST, cap)
        self.free = free
        self.free_anti = free_anti
        self.ideal_10_monomials = ideal10
        self.ideal_01_monomials = ideal01
        self.to_holomorphic_first = change_of_basis(free_anti, free)
        self.ideal_10_basis = {p: [Element.basis(m.index) for m in ms] for p, ms in ideal10.items()}
        self.ideal_01_basis = {p: [Element(self.to_holomorphic_first[m.index]) for m in ms]
                               for p, ms in ideal01.items()}
        in10 = {m.index for ms in ideal10.values() for m in ms}
        relations = {p: [dict(v) for v in self.ideal_10_basis[p] + self.ideal_01_basis[p]]
                     for p in range(1, depth + 1)}
        super().__init__(free, relations, priority=lambda c: (c not in in10, c))
        self.quotient_basis = {p: [free.monomials[self.rep[i]] for i in self.by_degree[p]]
                               for p in range(1, depth + 1)}
        self.block_index: dict[str, list[int]] = {}
        for i, c in enumerate(self.rep):
            self.block_index.setdefault(btype_key(free.monomials[c].btype, n), []).append(i)
        self._conj_cache: dict[int, dict] = {}

    @property
    def n(self) -> int:
        return self.split.n

    def ideal_sum_dim(self, p: int) -> int:
        return self.relation_rank[p]

    def ideal_intersection_dim(self, p: int) -> int:
        return len(self.ideal_10_basis[p]) + len(self.ideal_01_basis[p]) - self.relation_rank[p]

    def monomial(self, i: int) -> HallMonomial:
        return self.free.monomials[self.rep[i]]

    def btype(self, i: int) -> tuple:
        return self.monomial(i).btype

    # -- parsing ---------------------------------------------------------

    def _name_tree(self, tree):
        if isinstance(tree, str):
            return self.split.canonical_name(tree)
        return (self._name_tree(tree[0]), self._name_tree(tree[1]))

    def free_element(self, text_or_terms) -> Element:
        """Element of the free algebra from text or ``[(coeff, name_tree)]``."""
        from .syntax import parse_element

        terms = parse_element(text_or_terms) if isinstance(text_or_terms, str) else text_or_terms
        return self.free.element([(c, self._name_tree(t)) for c, t in terms])

    def element(self, text_or_terms) -> Element:
        return self.project(self.free_element(text_or_terms))

    # -- conjugation -----------------------------------------------------

    def _mirror(self, tree):
        n = self.n
        if isinstance(tree, int):
            return tree + n if tree <= n else tree - n
        return (self._mirror(tree[0]), self._mirror(tree[1]))

    def conjugate_free(self, x) -> Element:
        acc: dict = {}
        for c, v in x.items():
            t = self._mirror(self.free.monomials[c].tree())
            add_scaled(acc, self.free.rewrite_tree(t), conj(v))
        return Element._wrap(acc)

    def conjugate_basis(self, i: int) -> dict:
        hit = self._conj_cache.get(i)
        if hit is None:
            hit = self.project(self.conjugate_free({self.rep[i]: 1})).terms()
            self._conj_cache[i] = hit
        return hit

    def conjugate(self, x) -> Element:
        acc: dict = {}
        for i, v in x.items():
            add_scaled(acc, self.conjugate_basis(i), conj(v))
        return Element._wrap(acc)


def build_universal_cr(n: int, depth: int, cap: int = DEFAULT_BASIS_CAP) -> UniversalCRAlgebra:
    return UniversalCRAlgebra(n, depth, cap)


def type_blocks(u: UniversalCRAlgebra, k: int) -> list[tuple[str, int]]:
    """B-type blocks of degree ``k``, most holomorphic first."""
    if not 1 <= k <= u.depth:
        raise ValueError("degree out of range")
    blocks = {}
    for i in u.by_degree[k]:
        bt = u.btype(i)
        blocks[bt] = blocks.get(bt, 0) + 1
    return [(btype_key(bt, u.n), d) for bt, d in sorted(blocks.items(), reverse=True)]


def _leaf_counts(u: UniversalCRAlgebra, tree) -> tuple:
    names = u.free.names
    counts = [0] * len(names)
    for nm in tree_names(u.free.name_tree(tree)):
        counts[names.index(nm)] += 1
    return tuple(counts)


def independent_by_type(monomials, u: UniversalCRAlgebra) -> bool:
    """Whether the images of the given bracket monomials in ``u`` are linearly independent.

    Pairwise distinct B-types with no image vanishing certify independence
    directly; otherwise an exact rank decides.
    """
    trees = []
    for m in monomials:
        if isinstance(m, HallMonomial):
            trees.append(m.tree())
        else:
            tree = parse_monomial(m) if isinstance(m, str) else m
            trees.append(u.free.position_tree(u._name_tree(tree)))
    images = [u.project(u.free.rewrite_tree(t)) for t in trees]
    types = [_leaf_counts(u, t) for t in trees]
    if len(set(types)) == len(types) and all(images):
        return True
    return echelon([im.terms() for im in images], u.dim).rank == len(images)
