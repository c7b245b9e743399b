import random
from fractions import Fraction

import pytest

from crtanaka.algebra import Element, lie_axiom_violations
from crtanaka.cr_universal import (ANTIHOLOMORPHIC_FIRST, HOLOMORPHIC_FIRST, CRGeneratorSplit,
                                   adapted_hall_basis, btype_key, build_universal_cr,
                                   change_of_basis, ideal_by_brackets, independent_by_type,
                                   type_blocks)
from crtanaka.exact import I, echelon
from crtanaka.symbol import check_fundamental

INSTANCES = [(1, 2), (1, 4), (1, 5), (2, 2), (2, 3), (2, 4), (3, 3)]


@pytest.fixture(scope="module")
def universals():
    return {(n, mu): build_universal_cr(n, mu) for n, mu in INSTANCES}


def _rank(vectors, dim):
    return echelon([dict(v) for v in vectors], dim).rank


def test_split():
    sp = CRGeneratorSplit(2)
    assert sp.names() == ("E1", "E2", "F1", "F2")
    assert sp.names(ANTIHOLOMORPHIC_FIRST) == ("F1", "F2", "E1", "E2")
    assert sp.conjugate_name("E2") == "F2"
    with pytest.raises(ValueError):
        CRGeneratorSplit(0)


def test_btype_key():
    assert btype_key((2, 1, 0, 1), 2) == "(2,1|0,1)"


def test_adapted_basis_n1_has_empty_ideal():
    _, ideal = adapted_hall_basis(CRGeneratorSplit(1), 3)
    assert all(not v for v in ideal.values())


def test_adapted_basis_n2_degree2():
    free, ideal = adapted_hall_basis(CRGeneratorSplit(2), 2)
    assert [free.label(m.index) for m in ideal[2]] == ["[E2,E1]"]


@pytest.mark.parametrize("n,mu", [(2, 3), (2, 4), (3, 3), (3, 4)])
@pytest.mark.parametrize("which", [HOLOMORPHIC_FIRST, ANTIHOLOMORPHIC_FIRST])
def test_hall_subbasis_spans_ideal(n, mu, which):
    """The ideal's Hall monomials and the iterated-bracket span have equal rank and span."""
    free, ideal = adapted_hall_basis(CRGeneratorSplit(n), mu, which)
    oracle = ideal_by_brackets(free, set(range(n)), mu)
    for p in range(2, mu + 1):
        hall = [{m.index: 1} for m in ideal[p]]
        r = _rank(oracle[p], free.dim)
        assert len(hall) == r
        assert _rank(hall + oracle[p], free.dim) == r


def test_degree3_ideal_dimension_n2():
    free, ideal = adapted_hall_basis(CRGeneratorSplit(2), 3)
    oracle = ideal_by_brackets(free, {0, 1}, 3)
    assert len(oracle[3]) == 4
    assert len(ideal[3]) == 4


def test_ideal_is_sum_of_btype_components():
    free, _ = adapted_hall_basis(CRGeneratorSplit(2), 4)
    oracle = ideal_by_brackets(free, {0, 1}, 4)
    for p in range(2, 5):
        span = echelon([dict(v) for v in oracle[p]], free.dim)
        for v in oracle[p]:
            parts: dict = {}
            for i, c in v.items():
                parts.setdefault(free.monomials[i].btype, {})[i] = c
            total: dict = {}
            for part in parts.values():
                assert span.contains(part)
                for i, c in part.items():
                    total[i] = total.get(i, 0) + c
            assert Element(total) == Element(v)


@pytest.mark.parametrize("n,mu,dims", [
    (1, 4, [2, 1, 2, 3]), (2, 2, [4, 4]), (2, 3, [4, 4, 12]), (2, 4, [4, 4, 12, 31]), (3, 3, [6, 9, 36]),
])
def test_dims(universals, n, mu, dims):
    assert universals[(n, mu)].dims() == dims


def test_dims_from_ideal_dims(universals):
    for (n, mu), u in universals.items():
        free_dims = u.free.dims()
        for p in range(1, mu + 1):
            assert u.dims()[p - 1] == free_dims[p - 1] - u.ideal_sum_dim(p)
            assert len(u.ideal_10_basis[p]) == len(u.ideal_01_basis[p])
            if u.ideal_intersection_dim(p) == 0:
                assert u.dims()[p - 1] == (free_dims[p - 1] - len(u.ideal_10_basis[p])
                                           - len(u.ideal_01_basis[p]))


def test_ideals_intersect_in_degree_four(universals):
    u = universals[(2, 4)]
    assert u.ideal_intersection_dim(4) == 1
    assert not u.element("[[E2,E1],[F2,F1]]")


def test_n2_mu3_matches_oracle_formula(universals):
    u = universals[(2, 3)]
    free, _ = adapted_hall_basis(CRGeneratorSplit(2), 3)
    i10 = len(ideal_by_brackets(free, {0, 1}, 3)[3])
    assert u.dims()[2] == 20 - 2 * i10


def test_block_sums(universals):
    for (n, mu), u in universals.items():
        for k in range(1, mu + 1):
            assert sum(d for _, d in type_blocks(u, k)) == u.dims()[k - 1]
            assert sum(len(v) for key, v in u.block_index.items()
                       if sum(map(int, key.strip("()").replace("|", ",").split(","))) == k) \
                == u.dims()[k - 1]


def test_type_blocks_n1(universals):
    u = universals[(1, 4)]
    assert type_blocks(u, 1) == [("(1|0)", 1), ("(0|1)", 1)]
    assert type_blocks(u, 2) == [("(1|1)", 1)]
    assert type_blocks(u, 3) == [("(2|1)", 1), ("(1|2)", 1)]
    with pytest.raises(ValueError):
        type_blocks(u, 5)


def test_integrability(universals):
    for (n, mu), u in universals.items():
        e = [u.element(f"E{i}") for i in range(1, n + 1)]
        f = [u.element(f"F{i}") for i in range(1, n + 1)]
        for half in (e, f):
            for a in half:
                for b in half:
                    assert not u.bracket(a, b)


def test_lie_axioms(universals):
    for key, u in universals.items():
        if u.dim <= 200:
            assert lie_axiom_violations(u) == [], key


def test_fundamental(universals):
    for u in universals.values():
        assert check_fundamental(u)


def test_change_of_basis_round_trip():
    sp = CRGeneratorSplit(2)
    a, _ = adapted_hall_basis(sp, 4, HOLOMORPHIC_FIRST)
    b, _ = adapted_hall_basis(sp, 4, ANTIHOLOMORPHIC_FIRST)
    ab, ba = change_of_basis(a, b), change_of_basis(b, a)
    for i in range(a.dim):
        back: dict = {}
        for j, c in ab[i].items():
            for k, x in ba[j].items():
                back[k] = back.get(k, 0) + c * x
        assert Element(back) == Element({i: 1})


def test_conjugation_on_random_pairs(universals):
    rng = random.Random(7)
    for key in [(1, 4), (2, 3)]:
        u = universals[key]
        for _ in range(1000):
            x = Element({rng.randrange(u.dim): Fraction(rng.randint(-3, 3)) + rng.randint(-2, 2) * I
                         for _ in range(3)})
            y = Element({rng.randrange(u.dim): Fraction(rng.randint(-3, 3)) for _ in range(3)})
            assert u.conjugate(u.conjugate(x)) == x
            assert u.conjugate(u.bracket(x, y)) == u.bracket(u.conjugate(x), u.conjugate(y))


def test_independent_by_type(universals):
    u1, u2 = universals[(1, 4)], universals[(2, 3)]
    assert independent_by_type(["[E1,F1]", "[E1,[E1,F1]]"], u1)
    assert not independent_by_type(["[E2,E1]"], u2)
    assert independent_by_type(["[F1,[E1,F1]]", "[E1,[E1,F1]]"], u1)
    assert not independent_by_type(["[E1,F1]", "[F1,E1]"], u1)
