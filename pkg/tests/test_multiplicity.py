from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from gmrawave.catalog import journe_multiplicity
from gmrawave.errors import ConsistencyViolated, IndexOutOfRange
from gmrawave.intervals import IntervalSet
from gmrawave.lattice import make_scheme
from gmrawave.multiplicity import (MultiplicityFn, check_consistency_equation,
                                   check_consistency_inequality, check_delta_conditions,
                                   conjugate_multiplicity, make_pair, translate_count)

DYADIC = make_scheme(2)
GRID = 7 * 2 ** 8


def test_journe_sets():
    m = journe_multiplicity()
    assert m.c == 2
    assert m.s_set(1).measure() == F(5, 7)
    assert m.s_set(2) == IntervalSet([(F(-1, 7), F(1, 7))])
    with pytest.raises(IndexOutOfRange):
        m.s_set(3)


def test_journe_complement_is_identically_one():
    mt = conjugate_multiplicity(DYADIC, journe_multiplicity())
    assert mt.is_piecewise
    assert mt == MultiplicityFn.constant(1)


def test_journe_consistency_equation_on_grid():
    pair = make_pair(DYADIC, journe_multiplicity())
    assert check_consistency_equation(pair, DYADIC, GRID).passed


def test_journe_delta_conditions():
    rep = check_delta_conditions(DYADIC, journe_multiplicity(), K=4, nMax=8, P=3)
    assert rep.passed, rep.to_text()


def test_classical_delta_conditions():
    assert check_delta_conditions(DYADIC, MultiplicityFn.constant(1), K=4, nMax=8, P=3).passed


def test_vanishing_multiplicity_has_empty_delta():
    rep = check_delta_conditions(DYADIC, MultiplicityFn.constant(0), K=4, nMax=8, P=3)
    assert not rep.passed


def test_consistency_counterexample():
    m = MultiplicityFn(1, pieces=[(F(-1, 2), F(-1, 4), 2), (F(-1, 4), F(1, 2), 0)])
    rep = check_consistency_inequality(DYADIC, m, 64)
    assert not rep.passed
    with pytest.raises(ConsistencyViolated):
        conjugate_multiplicity(DYADIC, m)


def test_mismatched_complement_rejected():
    with pytest.raises(ConsistencyViolated):
        make_pair(DYADIC, journe_multiplicity(), MultiplicityFn.constant(2))


@st.composite
def dyadic_multiplicities(draw):
    """Random piecewise multiplicities with values in {0, 1}."""
    den = draw(st.sampled_from([4, 8, 14]))
    cuts = sorted(draw(st.sets(st.integers(-den // 2 + 1, den // 2 - 1), max_size=4)))
    edges = [F(-1, 2)] + [F(c, den) for c in cuts] + [F(1, 2)]
    vals = [draw(st.integers(0, 1)) for _ in edges[:-1]]
    return MultiplicityFn(1, pieces=list(zip(edges, edges[1:], vals)))


@given(dyadic_multiplicities(), st.fractions(min_value=F(-1, 2), max_value=F(1, 2), max_denominator=60))
def test_complement_satisfies_consistency_pointwise(m, x):
    try:
        mt = conjugate_multiplicity(DYADIC, m)
    except ConsistencyViolated:
        return
    total = sum(m.value(p) for p in DYADIC.preimages((x,)))
    if x != F(1, 2):
        assert m.value(x) + mt.value(x) == total


@given(st.lists(st.tuples(st.fractions(-3, 3, max_denominator=8), st.fractions(0, 2, max_denominator=8)),
                max_size=3), st.fractions(F(-1, 2), F(1, 2), max_denominator=32))
def test_translate_count_pointwise(items, x):
    delta = IntervalSet([(a, a + w) for a, w in items if w > 0])
    if x == F(1, 2):
        return
    expected = sum(1 for n in range(-10, 11) if delta.contains(x + n))
    assert translate_count(delta).value(x) == expected


def test_two_dimensional_multiplicity():
    quincunx = make_scheme([[1, 1], [-1, 1]])
    m = MultiplicityFn.constant(1, d=2)
    pair = make_pair(quincunx, m)
    assert pair.m_tilde.c == 1
    assert check_consistency_equation(pair, quincunx, 8).passed
