from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crtanaka.algebra import Element, lie_axiom_violations
from crtanaka.errors import ResourceLimitError
from crtanaka.free_lie import b_type, bracket, hall_basis, hall_rewrite, witt_dimension
from crtanaka.syntax import ParseError, parse_monomial


# Oracle: a Lie element is determined by its image in the free associative
# algebra, where [a, b] = ab - ba.

def assoc(tree) -> dict:
    if isinstance(tree, int):
        return {(tree,): 1}
    a, b = assoc(tree[0]), assoc(tree[1])
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            out[u + v] = out.get(u + v, 0) + x * y
            out[v + u] = out.get(v + u, 0) - x * y
    return {w: c for w, c in out.items() if c}


def assoc_of(alg, element) -> dict:
    out: dict = {}
    for i, c in element.items():
        for w, x in assoc(alg.monomials[i].tree()).items():
            out[w] = out.get(w, 0) + c * x
    return {w: c for w, c in out.items() if c}


def trees(k, max_degree):
    leaves = st.integers(1, k)
    return st.recursive(leaves, lambda sub: st.tuples(sub, sub), max_leaves=max_degree)


def degree(tree):
    return 1 if isinstance(tree, int) else degree(tree[0]) + degree(tree[1])


@pytest.mark.parametrize("k", range(1, 7))
@pytest.mark.parametrize("d", range(1, 7))
def test_sizes_match_witt_formula(k, d):
    if sum(witt_dimension(k, e) for e in range(1, d + 1)) > 20000:
        pytest.skip("above the default cap")
    alg = hall_basis(k, d)
    assert alg.dims() == [witt_dimension(k, e) for e in range(1, d + 1)]


def test_witt_values():
    assert [witt_dimension(2, d) for d in range(1, 7)] == [2, 1, 2, 3, 6, 9]
    assert witt_dimension(3, 4) == 18


def test_small_basis():
    alg = hall_basis(2, 3)
    assert alg.dims() == [2, 1, 2]
    assert [alg.label(i) for i in range(alg.dim)] == ["X1", "X2", "[X2,X1]", "[[X2,X1],X1]",
                                                      "[[X2,X1],X2]"]


def test_one_generator():
    assert hall_basis(1, 3).dims() == [1, 0, 0]


def test_hall_selection_rules():
    alg = hall_basis(3, 5)
    for m in alg.monomials:
        if m.is_leaf:
            continue
        assert m.right.index < m.left.index
        if not m.left.is_leaf:
            assert m.left.right.index <= m.right.index


def test_rewrite_example():
    alg = hall_basis(2, 3)
    x = hall_rewrite("[X1,[X1,X2]]", alg)
    assert alg.format(x) == "[[X2,X1],X1]"
    assert bracket({0: 1}, {1: 1}, alg) == Element({2: -1})


def test_truncation():
    alg = hall_basis(2, 3)
    assert not hall_rewrite("[X1,[X1,[X1,X2]]]", alg)


def test_cap():
    with pytest.raises(ResourceLimitError):
        hall_basis(6, 6, cap=100)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_monomial("[X1,X2")
    assert err.value.pos == 6


@settings(max_examples=200, deadline=None)
@given(trees(3, 5))
def test_rewrite_agrees_with_associative_oracle(tree):
    alg = hall_basis(3, 5)
    assert assoc_of(alg, Element(alg.rewrite_tree(tree))) == assoc(tree)


@settings(max_examples=100, deadline=None)
@given(trees(3, 5))
def test_rewrite_idempotent(tree):
    alg = hall_basis(3, 5)
    x = Element(alg.rewrite_tree(tree))
    again = Element()
    for i, c in x.items():
        again = again + Element(alg.rewrite_tree(alg.monomials[i].tree())) * c
    assert again == x


@settings(max_examples=100, deadline=None)
@given(trees(3, 5))
def test_reassociation_keeps_btype(tree):
    alg = hall_basis(3, 5)
    counts = [0, 0, 0]

    def walk(t):
        if isinstance(t, int):
            counts[t - 1] += 1
        else:
            walk(t[0]), walk(t[1])
    walk(tree)
    for i in alg.rewrite_tree(tree):
        assert b_type(alg.monomials[i]) == tuple(counts)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_adjoint_matrix_matches_oracle(data):
    alg = hall_basis(2, 5)
    x = {i: Fraction(data.draw(st.integers(-2, 2))) for i in alg.by_degree[1]}
    x = Element(x)
    p = data.draw(st.integers(1, 4))
    for i, col in alg.ad_matrix(x, p).items():
        expect: dict = {}
        for j, c in x.items():
            for w, v in assoc((j + 1, alg.monomials[i].tree())).items():
                expect[w] = expect.get(w, 0) + c * v
        assert assoc_of(alg, col) == {w: c for w, c in expect.items() if c}


@pytest.mark.parametrize("k,d", [(2, 5), (3, 4), (4, 3)])
def test_lie_axioms(k, d):
    assert lie_axiom_violations(hall_basis(k, d)) == []


def test_structure_constants_are_antisymmetric_and_graded():
    alg = hall_basis(3, 4)
    for (i, j), v in alg.structure_constants().items():
        assert alg.basis_bracket(j, i) == {k: -c for k, c in v.items()}
        assert all(alg.degrees[k] == alg.degrees[i] + alg.degrees[j] for k in v)
