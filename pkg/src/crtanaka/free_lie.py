"""Truncated free Lie algebras in a Hall basis.

The Hall basis is built degree by degree.  A pair ``[U, V]`` of earlier basis
elements is kept when ``V < U`` and, if ``U = [U1, U2]``, also ``U2 <= V``.
The order ``<`` is degree-major and, inside a degree, lexicographic in
(degree of left factor, index of left factor, index of right factor).

Brackets of basis elements are put back into the basis by the classical
rewriting loop: antisymmetry for pairs in the wrong order and
``[[U1,U2],V] = [[U1,V],U2] - [[U2,V],U1]`` when ``V < U2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import Element, GradedAlgebra, add_scaled
from .errors import ResourceLimitError
from .syntax import format_tree, parse_element, parse_monomial

DEFAULT_BASIS_CAP = 20_000


@dataclass(frozen=True)
class Generator:
    index: int  # 1-based position in the ordered generating set
    name: str


@dataclass(frozen=True, eq=False)
class HallMonomial:
    index: int
    degree: int
    btype: tuple
    generator: int | None = None  # 1-based, leaves only
    left: HallMonomial | None = None
    right: HallMonomial | None = None

    @property
    def is_leaf(self) -> bool:
        return self.generator is not None

    @property
    def hall_index(self) -> int:
        return self.index

    def tree(self):
        """Formal tree with 1-based generator positions at the leaves."""
        if self.is_leaf:
            return self.generator
        return (self.left.tree(), self.right.tree())

    def contains_pair(self, leaves: set) -> bool:
        """True if some degree-2 subtree has both leaves in ``leaves``."""
        if self.is_leaf:
            return False
        if self.degree == 2:
            return self.left.generator in leaves and self.right.generator in leaves
        return self.left.contains_pair(leaves) or self.right.contains_pair(leaves)


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def witt_dimension(generators: int, degree: int) -> int:
    """Dimension of the degree-``degree`` part of the free Lie algebra on ``generators`` letters."""
    if generators < 1 or degree < 1:
        raise ValueError("generators and degree must be positive")
    total = sum(_mobius(e) * generators ** (degree // e)
                for e in range(1, degree + 1) if degree % e == 0)
    return total // degree


class FreeLieAlgebra(GradedAlgebra):
    """Free Lie algebra on ordered generators, truncated above ``depth``."""

    def __init__(self, names: Sequence[str], depth: int, cap: int = DEFAULT_BASIS_CAP):
        k = len(names)
        if k < 1 or depth < 1:
            raise ValueError("need at least one generator and depth >= 1")
        predicted = sum(witt_dimension(k, d) for d in range(1, depth + 1))
        if predicted > cap:
            raise ResourceLimitError(
                f"Hall basis would have {predicted} elements, above the cap of {cap}")
        self.names = tuple(names)
        self.generators = tuple(Generator(i + 1, n) for i, n in enumerate(names))
        mons: list[HallMonomial] = []
        for g in range(k):
            bt = tuple(1 if j == g else 0 for j in range(k))
            mons.append(HallMonomial(g, 1, bt, generator=g + 1))
        layers = {1: list(range(k))}
        for d in range(2, depth + 1):
            cands = []
            for e in range(1, d):
                for u in layers[e]:
                    mu = mons[u]
                    for v in layers[d - e]:
                        if v >= u:
                            continue
                        if not mu.is_leaf and mu.right.index > v:
                            continue
                        cands.append((e, u, v))
            cands.sort()
            layers[d] = []
            for _, u, v in cands:
                bt = tuple(a + b for a, b in zip(mons[u].btype, mons[v].btype))
                idx = len(mons)
                mons.append(HallMonomial(idx, d, bt, left=mons[u], right=mons[v]))
                layers[d].append(idx)
        self.monomials = mons
        self._pair = {(m.left.index, m.right.index): m.index for m in mons if not m.is_leaf}
        self._tree_index = {m.tree(): m.index for m in mons}
        self._rewrite_memo: dict = {}
        labels = [format_tree(self.name_tree(m.tree())) for m in mons]
        super().__init__([m.degree for m in mons], depth, labels)

    # -- trees -----------------------------------------------------------

    def name_tree(self, tree):
        if isinstance(tree, int):
            return self.names[tree - 1]
        return (self.name_tree(tree[0]), self.name_tree(tree[1]))

    def position_tree(self, tree):
        """Convert a name tree to a position tree (ints pass through)."""
        if isinstance(tree, int):
            return tree
        if isinstance(tree, str):
            try:
                return self.names.index(tree) + 1
            except ValueError:
                raise KeyError(f"unknown generator {tree!r}") from None
        return (self.position_tree(tree[0]), self.position_tree(tree[1]))

    def index_of(self, tree) -> int | None:
        """Hall index of a tree that is literally a Hall monomial, else None."""
        return self._tree_index.get(self.position_tree(tree))

    # -- brackets --------------------------------------------------------

    def _compute_bracket(self, a: int, b: int) -> dict:
        # reached only for a < b with total degree <= depth
        return {k: -c for k, c in self._hall_bracket(b, a).items()}

    def _hall_bracket(self, a: int, b: int) -> dict:
        """[h_a, h_b] for b < a, in the Hall basis."""
        key = (a, b)
        hit = self._table.get(key)
        if hit is not None:
            return hit
        ua = self.monomials[a]
        if ua.is_leaf or ua.right.index <= b:
            res = {self._pair[(a, b)]: 1}
        else:
            u1, u2 = ua.left.index, ua.right.index
            res: dict = {}
            for t, c in self.basis_bracket(u1, b).items():
                add_scaled(res, self.basis_bracket(t, u2), c)
            for t, c in self.basis_bracket(u2, b).items():
                add_scaled(res, self.basis_bracket(t, u1), -c)
        self._table[key] = res
        return res

    def basis_bracket(self, i: int, j: int) -> dict:
        if i == j or self.degrees[i] + self.degrees[j] > self.depth:
            return {}
        if i > j:
            return self._hall_bracket(i, j)
        return super().basis_bracket(i, j)

    def rewrite_tree(self, tree) -> dict:
        """Hall expansion of a formal position tree (memoized, read-only result)."""
        hit = self._rewrite_memo.get(tree)
        if hit is not None:
            return hit
        if isinstance(tree, int):
            res = {tree - 1: 1}
        elif self.tree_degree(tree) > self.depth:
            res = {}
        else:
            res = self.bracket(self.rewrite_tree(tree[0]), self.rewrite_tree(tree[1])).terms()
        self._rewrite_memo[tree] = res
        return res

    @staticmethod
    def tree_degree(tree) -> int:
        if isinstance(tree, (int, str)):
            return 1
        return FreeLieAlgebra.tree_degree(tree[0]) + FreeLieAlgebra.tree_degree(tree[1])

    def element(self, text_or_terms) -> Element:
        """Element from text (``"3/2*[[X2,X1],X1] - [X2,X1]"``) or ``[(coeff, tree)]``."""
        terms = parse_element(text_or_terms) if isinstance(text_or_terms, str) else text_or_terms
        acc: dict = {}
        for c, tree in terms:
            add_scaled(acc, self.rewrite_tree(self.position_tree(tree)), c)
        return Element(acc)


def hall_basis(generators, depth: int, cap: int = DEFAULT_BASIS_CAP) -> FreeLieAlgebra:
    """Hall basis up to ``depth``; ``generators`` is a count (names X1..Xk) or a list of names."""
    if isinstance(generators, int):
        if generators < 1:
            raise ValueError("generators must be >= 1")
        names = [f"X{i}" for i in range(1, generators + 1)]
    else:
        names = list(generators)
    return FreeLieAlgebra(names, depth, cap)


def hall_rewrite(expr, algebra: FreeLieAlgebra) -> Element:
    """Expand a formal bracket tree (text, name tree or position tree) in the Hall basis."""
    if isinstance(expr, str):
        expr = parse_monomial(expr)
    return Element(algebra.rewrite_tree(algebra.position_tree(expr)))


def bracket(x, y, algebra: GradedAlgebra) -> Element:
    return algebra.bracket(x, y)


def b_type(m: HallMonomial) -> tuple:
    return m.btype
