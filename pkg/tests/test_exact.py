from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from crtanaka.exact import (GaussianRational, I, SparseMatrix, conj, echelon, format_scalar,
                            kernel_basis, parse_scalar, rank, simplify, solve_in_span,
                            solve_semilinear_fixed_points)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gaussians = st.builds(lambda a, b: simplify(GaussianRational(a, b)), rationals, rationals)
small = st.integers(-3, 3).map(Fraction) | st.sampled_from([I, -I, 1 + I, Fraction(1, 2) * I])


def matrices(entries=small, max_side=5):
    return st.integers(1, max_side).flatmap(lambda r: st.integers(1, max_side).flatmap(
        lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r)))


def _to_sympy(x):
    return sympy.Rational(x.numerator, x.denominator) if not isinstance(x, GaussianRational) else \
        sympy.Rational(x.re.numerator, x.re.denominator) + \
        sympy.I * sympy.Rational(x.im.numerator, x.im.denominator)


class TestScalars:
    def test_gaussian_mixes_with_rationals(self):
        z = GaussianRational(1, 2)
        assert z + 1 == GaussianRational(2, 2)
        assert z * z == GaussianRational(-3, 4)
        assert (z / z) == 1
        assert GaussianRational(3, 0) == 3
        assert hash(GaussianRational(3, 0)) == hash(3)

    def test_i_squared(self):
        assert I * I == -1
        assert simplify(I * I) == -1 and not isinstance(simplify(I * I), GaussianRational)

    def test_conj(self):
        assert conj(GaussianRational(1, 2)) == GaussianRational(1, -2)
        assert conj(Fraction(3, 4)) == Fraction(3, 4)

    @pytest.mark.parametrize("value,text", [
        (Fraction(3, 4), "3/4"), (Fraction(-2), "-2"), (I, "1*i"),
        (GaussianRational(Fraction(1, 2), Fraction(-3, 5)), "1/2-3/5*i"),
        (GaussianRational(0, Fraction(3, 2)), "3/2*i"),
    ])
    def test_format(self, value, text):
        assert format_scalar(value) == text

    @pytest.mark.parametrize("text,value", [
        ("i", I), ("-i", -I), ("2+i", 2 + I), ("3/2*i", Fraction(3, 2) * I), ("-7/3", Fraction(-7, 3)),
    ])
    def test_parse(self, text, value):
        assert parse_scalar(text) == value

    @given(gaussians)
    def test_round_trip(self, z):
        assert parse_scalar(format_scalar(z)) == z

    @given(gaussians, gaussians, gaussians)
    def test_field_axioms(self, a, b, c):
        assert (a + b) * c == a * c + b * c
        assert conj(a * b) == conj(a) * conj(b)
        if b:
            assert (a / b) * b == a


class TestElimination:
    def test_rank_examples(self):
        assert rank(SparseMatrix.from_dense([[1, 2], [2, 4]])) == 1
        assert rank(SparseMatrix.from_dense([[1, 0], [0, I]])) == 2

    def test_kernel_examples(self):
        assert kernel_basis(SparseMatrix.from_dense([[1, 1]])) == [[1, -1]]
        assert kernel_basis(SparseMatrix(2, 3)) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

    @settings(max_examples=80, deadline=None)
    @given(matrices())
    def test_rank_nullity_against_sympy(self, rows):
        m = SparseMatrix.from_dense(rows)
        ker = kernel_basis(m)
        assert rank(m) + len(ker) == m.ncols
        assert rank(m) == sympy.Matrix([[_to_sympy(x) for x in r] for r in rows]).rank()
        for v in ker:
            assert all(x == 0 for x in m.matvec(v))
            assert next(x for x in v if x) == 1

    @given(matrices(max_side=4))
    def test_solve_in_span(self, rows):
        e = echelon([dict(enumerate(r)) for r in rows], len(rows[0]))
        basis = list(e.pivots.values())
        if not basis:
            return
        target = {}
        for k, b in enumerate(basis):
            for c, x in b.items():
                target[c] = target.get(c, 0) + (k + 1) * x
        coords = solve_in_span(basis, {c: x for c, x in target.items() if x})
        assert coords == [k + 1 for k in range(len(basis))]

    def test_solve_outside_span(self):
        assert solve_in_span([{0: 1}], {1: 1}) is None

    def test_priority_prefers_columns(self):
        e = echelon([{0: 1, 1: 1}], 2, priority=lambda c: -c)
        assert list(e.pivots) == [1]


class TestSemilinear:
    def test_examples(self):
        m = SparseMatrix.from_dense([[1, -1]])
        assert len(solve_semilinear_fixed_points(m, [(1, 1), (0, 1)])) == 1
        assert len(solve_semilinear_fixed_points(SparseMatrix(0, 2), [(1, 1), (0, 1)])) == 2
        assert len(solve_semilinear_fixed_points(SparseMatrix.from_dense([[1, 0], [0, 1]]),
                                                 [(0, 1), (1, 1)])) == 0

    def test_fixed_vectors_are_fixed(self):
        s = SparseMatrix.from_dense([[0, I], [I, 0]])
        for v in solve_semilinear_fixed_points(SparseMatrix(0, 2), s):
            assert s.matvec([conj(x) for x in v]) == v

    def test_rejects_non_involution(self):
        with pytest.raises(ValueError, match="involution"):
            solve_semilinear_fixed_points(SparseMatrix(0, 2), SparseMatrix.from_dense([[2, 0], [0, 1]]))

    @settings(max_examples=50, deadline=None)
    @given(matrices(entries=small, max_side=3))
    def test_real_dim_equals_complex_dim_for_real_systems(self, rows):
        # a system stable under coordinate conjugation has a real form of full dimension
        real_rows = [[x + conj(x) for x in r] for r in rows]
        m = SparseMatrix.from_dense(real_rows)
        n = m.ncols
        fixed = solve_semilinear_fixed_points(m, [(j, 1) for j in range(n)])
        assert len(fixed) == len(kernel_basis(m))
