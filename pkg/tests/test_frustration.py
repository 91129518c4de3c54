import itertools
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings

from cnfmoments import CnfFormula, UnsupportedWidthError, eval_u_direct, eval_u_poly, moments, poly_coefficients
from cnfmoments.cnf import assignment_from_bits
from cnfmoments.frustration import variance_closed_form

from .conftest import brute_moments, brute_u_values, cnf_formulas


def test_eval_direct_examples(F, F_ex):
    assert eval_u_direct(F_ex, assignment_from_bits("0100")) == 0
    assert eval_u_direct(F, (1, 1, 1)) == 1
    assert eval_u_direct(CnfFormula(3, ()), (1, -1, 1)) == 0
    with pytest.raises(ValueError):
        eval_u_direct(F, (1, 1))
    with pytest.raises(ValueError):
        eval_u_direct(F, (1, 0, 1))


def test_polynomial_of_three_variable_instance(F):
    p = poly_coefficients(F)
    assert p.constant == Fr(5, 8)
    assert [p.lam(s) for s in (1, 2, 3)] == [Fr(1, 8), Fr(-1, 8), Fr(1, 8)]
    assert p.mu(1, 2) == p.mu(2, 1) == Fr(-1, 8)
    assert p.mu(1, 3) == Fr(1, 8)
    assert p.mu(2, 3) == Fr(3, 8)
    assert p.nu(3, 1, 2) == Fr(-1, 8)
    assert p.cubic == {(1, 2, 3): Fr(-1, 8)}


def test_polynomial_constant_f_ex(F_ex):
    assert poly_coefficients(F_ex).constant == Fr(3, 2)


def test_polynomial_unit_clause():
    p = poly_coefficients(CnfFormula.from_clauses(1, [[1]]))
    assert p.constant == Fr(1, 2)
    assert p.linear == {1: Fr(1, 2)}
    assert p.quadratic == {} and p.cubic == {}


def test_wide_clause_rejected_by_name():
    f = CnfFormula.from_clauses(4, [[1, 2], [1, -2, 3, 4]])
    with pytest.raises(UnsupportedWidthError, match="clause 2"):
        poly_coefficients(f)


def test_eval_poly_examples(F):
    p = poly_coefficients(F)
    assert eval_u_poly(p, (1, 1, 1)) == 1
    for bits in ("001", "101", "110"):  # the three solutions of F
        x = assignment_from_bits(bits)
        assert eval_u_direct(F, x) == 0
        assert eval_u_poly(p, x) == 0
    empty = poly_coefficients(CnfFormula(2, ()))
    assert eval_u_poly(empty, (1, -1)) == 0
    with pytest.raises(ValueError):
        eval_u_poly(p, (1,))


def test_moments_reference_values(F, F_ex, F_unsat):
    mf = moments(F)
    assert (mf.mean, mf.variance) == (Fr(5, 8), Fr(15, 64))
    me = moments(F_ex)
    assert (me.mean, me.second_moment, me.variance) == (Fr(3, 2), Fr(23, 8), Fr(5, 8))
    assert me.beta == Fr(23, 18)
    mu = moments(F_unsat)
    assert (mu.mean, mu.variance) == (Fr(7, 4), Fr(9, 16))
    assert mu.mean + mu.variance / mu.mean == Fr(29, 14)


def test_moments_match_brute_force_on_reference_instances(F, F_ex, F_unsat):
    for f in (F, F_ex, F_unsat):
        mom = moments(f)
        assert (mom.mean, mom.second_moment) == brute_moments(f)


def test_empty_formula_moments():
    mom = moments(CnfFormula(4, ()))
    assert mom.mean == mom.second_moment == mom.variance == 0
    assert mom.beta is None


def test_float_mode(F_ex):
    mom = moments(F_ex, exact=False)
    assert not mom.exact
    assert mom.variance == pytest.approx(5 / 8)
    assert mom.beta == pytest.approx(23 / 18)


def test_moments_json(F):
    data = moments(F).to_json()
    assert data["variance"] == {"num": "15", "den": "64", "str": "15/64"}


def test_empty_clause_counts_once_per_assignment():
    f = CnfFormula.from_clauses(2, [[], [1]])
    assert eval_u_direct(f, (1, 1)) == 1
    assert moments(f).mean == Fr(3, 2)
    assert (moments(f).mean, moments(f).second_moment) == brute_moments(f)


@settings(max_examples=120, deadline=None)
@given(cnf_formulas(max_n=7, max_m=14))
def test_polynomial_equals_direct_everywhere(f):
    p = poly_coefficients(f)
    for x in itertools.product((-1, 1), repeat=f.n):
        assert eval_u_poly(p, x) == eval_u_direct(f, x)


@settings(max_examples=150, deadline=None)
@given(cnf_formulas(max_n=8, max_m=20))
def test_coefficient_variance_equals_pairwise(f):
    assert variance_closed_form(f) == moments(f).variance


@settings(max_examples=150, deadline=None)
@given(cnf_formulas(max_n=8, max_m=16, max_width=6, allow_empty=True))
def test_moments_equal_brute_force(f):
    mom = moments(f)
    assert (mom.mean, mom.second_moment) == brute_moments(f)
    assert mom.variance >= 0
    assert mom.second_moment >= mom.mean**2
    assert (mom.mean == 0) == (f.m == 0)


@settings(max_examples=60, deadline=None)
@given(cnf_formulas(max_n=6, max_m=10))
def test_polynomial_matches_brute_force_oracle(f):
    p = poly_coefficients(f)
    for x, u in brute_u_values(f):
        assert eval_u_poly(p, x) == u
