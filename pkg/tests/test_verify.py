from fractions import Fraction

import pytest

from crtanaka.exact import I
from crtanaka.prolongation import DegreeShiftMap, prolong_until_zero
from crtanaka.symbol import make_symbol
from crtanaka.verify import (FAIL, CheckResult, PASS, VACUOUS, bracket_identity_suite, candidate_eigenvalues,
                             check_bracket_identities, check_claim_identity, check_eigenstructure,
                             check_lemma_quadratic, corrupt, lemma_reality_violation,
                             verify_main_theorem)

REL = "[E,[E,[E,F]]] + [F,[F,[E,F]]]"


@pytest.fixture(scope="module")
def heis1():
    return prolong_until_zero(make_symbol(1, 2)).tower


@pytest.fixture(scope="module")
def heis2():
    return prolong_until_zero(make_symbol(2, 2)).tower


def test_candidate_eigenvalues():
    assert set(candidate_eigenvalues(4, 1)) == {Fraction(-3, 2), -1}


def test_zero_map_passes(heis1):
    zero = DegreeShiftMap(1, {})
    for w in range(heis1.s.dim):
        assert check_bracket_identities(heis1, zero, {0: 1}, {w: 1}, 2)[0] == PASS


def test_bracket_expansion_on_heisenberg(heis1, heis2):
    for t in (heis1, heis2):
        mu = t.s.depth
        for L in t.levels[1].basis + t.levels[1].real_basis:
            status, wit, count = bracket_identity_suite(t, L, mu + 1)
            assert status == PASS, wit
            assert count == t.s.n * t.s.dim * (mu + 1)


def test_identities_on_heisenberg(heis1, heis2):
    for t in (heis1, heis2):
        for L in t.levels[1].real_basis:
            status, alpha, _ = check_lemma_quadratic(t, L)
            assert status == PASS
            for e in t.s.holomorphic:
                assert check_eigenstructure(t, L, {e: 1})[0] == PASS
            assert check_claim_identity(t, L, t.s.depth + 1)[0] in (PASS, VACUOUS)
        assert any(check_claim_identity(t, L)[0] == PASS for L in t.levels[1].real_basis)
        assert all(lemma_reality_violation(t, L) is None for L in t.levels[1].real_basis)


def test_alpha_zero_requires_zero_action(heis2):
    t = heis2
    hits = 0
    for L in t.levels[1].real_basis:
        _, alpha, _ = check_lemma_quadratic(t, L)
        for k, e in enumerate(t.s.holomorphic):
            if alpha[k] == 0:
                hits += 1
                assert check_eigenstructure(t, L, {e: 1})[0] == PASS
    assert hits > 0


# -- negative controls -------------------------------------------------------

def test_bracket_expansion_control(heis1):
    L = heis1.levels[1].real_basis[0]
    bad = corrupt(L, 2, 0, 1)
    status, wit, _ = bracket_identity_suite(heis1, bad, 3)
    assert status == FAIL
    assert wit["lhs"] != wit["rhs"]


def test_quadratic_control(heis2):
    L = heis2.levels[1].real_basis[0]
    status, _, wit = check_lemma_quadratic(heis2, corrupt(L, 0, 0, 1))
    assert status == FAIL and wit


def test_eigenstructure_control(heis1):
    L = heis1.levels[1].real_basis[0]
    status, _, wit = check_eigenstructure(heis1, corrupt(L, 0, 0, 1), {0: 1})
    assert status == FAIL and wit["reason"]


def test_claim_control(heis1):
    L = heis1.levels[1].real_basis[0]
    status, _, wit = check_claim_identity(heis1, corrupt(L, 0, 0, -1), 3)
    assert status == FAIL
    assert wit["lhs"] != wit["rhs"]


def test_reality_control(heis1):
    L = heis1.levels[1].real_basis[0]
    assert lemma_reality_violation(heis1, L) is None
    assert lemma_reality_violation(heis1, L * I) is not None


# -- full reports ------------------------------------------------------------

@pytest.mark.parametrize("n,mu,ideal", [(1, 4, []), (1, 5, []), (2, 4, []), (1, 4, [REL])])
def test_theorem_instances(n, mu, ideal):
    rep = verify_main_theorem(n, mu, ideal)
    assert rep.g1_real_dim == 0
    assert rep.theorem_status == "pass"
    assert rep.passed
    assert rep.check("theorem.g1_vanishes").status == PASS
    assert rep.check("identities.quadratic").status == VACUOUS


def test_heisenberg_report():
    rep = verify_main_theorem(1, 2)
    assert rep.real_dims == [2, 2, 1, 0]
    assert rep.theorem_status == "outside theorem hypotheses"
    assert rep.check("theorem.g1_vanishes").status == VACUOUS
    for name in ("identities.bracket_expansion", "identities.quadratic",
                 "identities.eigenstructure", "identities.claim"):
        assert rep.check(name).status == PASS
    d = rep.to_dict()
    assert d["g_dims_real"] == [2, 2, 1, 0]
    assert d["aut_real_dim"] == 8


def test_depth_three_instance():
    rep = verify_main_theorem(1, 3)
    assert rep.g1_real_dim == 0
    assert rep.passed


def test_failed_check_requires_witness():
    with pytest.raises(ValueError):
        CheckResult("x", FAIL)
    assert CheckResult("x", FAIL, witness={"a": 1}).to_dict()["witness"] == {"a": 1}
    with pytest.raises(ValueError):
        CheckResult("x", "maybe")


def test_report_flags_nonzero_g1_loudly():
    rep = verify_main_theorem(1, 4)
    rep.real_dims = [2, 1]
    assert rep.theorem_status == "FAIL"
