from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnfmoments import (
    CnfFormula,
    OracleCapExceeded,
    UDistribution,
    delta_leq,
    enumerate_distribution,
    model_count,
    moments,
    tail_prob,
)
from cnfmoments import oracle
from cnfmoments.bounds import basic_bound, cantelli_vk
from cnfmoments.cnf import assignment_to_bits

from .conftest import brute_counts, cnf_formulas


def test_distribution_of_f(F):
    d = enumerate_distribution(F)
    assert d.counts == (3, 5, 0, 0)
    assert (d.v(0), d.v(1), d.v(2)) == (Fr(3, 8), Fr(5, 8), 0)
    assert d.u_max == 1


def test_distribution_of_f_ex(F_ex):
    d = enumerate_distribution(F_ex)
    assert (d.v(0), d.v(1)) == (Fr(1, 16), Fr(1, 2))
    assert [assignment_to_bits(x) for x in oracle.iter_solutions(F_ex)] == ["0100"]


def test_distribution_of_unsat_variant(F_unsat):
    d = enumerate_distribution(F_unsat)
    assert d.v(0) == 0
    assert (d.v(1), d.v(2)) == (Fr(7, 16), Fr(6, 16))
    assert d.v_le(2) == Fr(13, 16)


def test_model_count(F, F_ex, F_unsat):
    assert [model_count(enumerate_distribution(f)) for f in (F, F_ex, F_unsat)] == [3, 1, 0]


def test_unused_variables_double_the_count():
    f = CnfFormula.from_clauses(3, [[1]])
    assert model_count(enumerate_distribution(f)) == 4


def test_delta_leq_examples(F, F_ex):
    d = enumerate_distribution(F_ex)
    assert delta_leq(d, Fr(23, 12)) == Fr(385, 1058)
    assert delta_leq(d, 1) == 0
    assert delta_leq(d, Fr(1, 3)) == 0
    # strict floor: at a = 2 only k = 1 contributes
    assert delta_leq(d, 2) == Fr(1, 2) * Fr(3, 4)
    assert delta_leq(enumerate_distribution(F), Fr(3, 2)) == Fr(25, 72)
    with pytest.raises(ValueError):
        delta_leq(d, 0)


def test_tail_prob_examples(F, F_unsat):
    assert tail_prob(enumerate_distribution(F), 1) == Fr(5, 8)
    assert tail_prob(enumerate_distribution(F), 0) == 1
    assert tail_prob(enumerate_distribution(F_unsat), 1) == 1
    with pytest.raises(ValueError):
        tail_prob(enumerate_distribution(F), 4)
    with pytest.raises(ValueError):
        tail_prob(enumerate_distribution(F), -1)


def test_cap_refuses_with_cost(monkeypatch):
    f = CnfFormula.from_clauses(40, [[1, 2]])
    with pytest.raises(OracleCapExceeded, match=r"2\^40"):
        enumerate_distribution(f)
    with pytest.raises(OracleCapExceeded):
        enumerate_distribution(CnfFormula(5, ()), cap=4)
    monkeypatch.setenv("FRUSTRATION_ORACLE_CAP", "3")
    with pytest.raises(OracleCapExceeded):
        enumerate_distribution(CnfFormula(4, ()))


def test_block_merging_is_order_independent(monkeypatch):
    from cnfmoments import GenSpec, generate

    f = generate(GenSpec(9, 25, 3, seed=5))
    whole = enumerate_distribution(f)
    monkeypatch.setattr(oracle, "BLOCK_BITS", 3)
    assert enumerate_distribution(f) == whole
    assert list(whole.counts) == brute_counts(f)


def test_json_round_trip(F_ex):
    d = enumerate_distribution(F_ex)
    assert UDistribution.from_json(d.to_json()) == d
    with pytest.raises(ValueError):
        UDistribution.from_json({"n": 2, "counts": [1, 1]})


@settings(max_examples=150, deadline=None)
@given(cnf_formulas(max_n=9, max_m=18, max_width=5, allow_empty=True))
def test_enumeration_matches_brute_force(f):
    d = enumerate_distribution(f)
    assert list(d.counts) == brute_counts(f)
    assert sum(d.counts) == 2**f.n
    mom = moments(f)
    assert d.mean() == mom.mean and d.second_moment() == mom.second_moment


@settings(max_examples=100, deadline=None)
@given(cnf_formulas(max_n=8, max_m=20), st.lists(st.fractions(Fr(1, 10), Fr(12)), min_size=2, max_size=8))
def test_scaled_delta_nondecreasing(f, cutoffs):
    d = enumerate_distribution(f)
    cutoffs = sorted(cutoffs)
    scaled = [a * a * delta_leq(d, a) for a in cutoffs]
    assert scaled == sorted(scaled)
    assert all(0 <= delta_leq(d, a) < 1 for a in cutoffs)


def _excess_above(d, a):
    return sum((d.v(k) * (Fr(k * k) / (a * a) - 1) for k in range(d.m + 1) if k > a), Fr(0))


@settings(max_examples=100, deadline=None)
@given(cnf_formulas(max_n=9, max_m=24))
def test_delta_exceeds_improvement_threshold(f):
    # Delta(a) - (1/beta - beta mu^2) = (basic bound - v0) + mass-weighted excess above a,
    # so the gap is >= 0 and vanishes only when the basic bound is tight and u <= a.
    d, mom = enumerate_distribution(f), moments(f)
    for j in range(1, 51):
        a = Fr(j, 50) * (d.m + 1)
        mu = mom.mean / a
        rhs = 1 / mom.beta - mom.beta * mu * mu
        gap = delta_leq(d, a) - rhs
        assert gap == (basic_bound(mom) - d.v(0)) + _excess_above(d, a)
        assert gap >= 0


def test_threshold_equality_case():
    # single unit clause: basic bound equals v0 and nothing lies above a > 1
    f = CnfFormula.from_clauses(1, [[-1]])
    d, mom = enumerate_distribution(f), moments(f)
    a = Fr(26, 25)
    assert delta_leq(d, a) == 1 / mom.beta - mom.beta * (mom.mean / a) ** 2 == Fr(51, 1352)


@settings(max_examples=100, deadline=None)
@given(cnf_formulas(max_n=9, max_m=24))
def test_cantelli_chain(f):
    d, mom = enumerate_distribution(f), moments(f)
    for k in range(d.m + 1):
        if k > mom.mean:
            assert d.v(k) <= tail_prob(d, k) <= cantelli_vk(mom, k)
        assert d.v(k) <= cantelli_vk(mom, k)
    assert d.v(0) <= basic_bound(mom)
