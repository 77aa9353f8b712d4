from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gmrawave.catalog import journe_smooth
from gmrawave.errors import DimensionMismatch, InitialConditionViolated
from gmrawave.filters import validate_system
from gmrawave.msystems import (JOURNE_MJ_LISTING, canonical_journe_msystem, diagonal_phase_loop,
                               filters_from_msystem, identity_loop, journe_loop_element,
                               journe_row_phase, loop_act, loop_quotient, max_deviation,
                               msystem_from_filters, msystem_to_unitary_section)

torus = st.fractions(F(-1, 2), F(1, 2), max_denominator=997).filter(lambda x: x < F(1, 2))


@pytest.fixture(scope="module")
def MJ():
    return canonical_journe_msystem()


@pytest.fixture(scope="module")
def Lp():
    return journe_loop_element()


@pytest.fixture(scope="module")
def smooth_negated():
    return msystem_from_filters(journe_smooth(highpass_sign=-1))


def _sample(n=200, seed=3):
    rng = np.random.default_rng(seed)
    return [(F(int(k), 1009),) for k in rng.integers(-504, 505, size=n)]


def test_listing_matches_canonical_filters(MJ):
    for j, S, vec in JOURNE_MJ_LISTING:
        for lo, hi in S:
            for x in (lo, (lo + hi) / 2):
                assert MJ.component(j, (x,)) == vec


def test_row_phase_is_minus_one():
    assert abs(journe_row_phase() + 1) < 1e-15


def test_loop_is_identity_at_origin(Lp):
    assert Lp.identity_deviation((F(0),)) == 0.0


@settings(max_examples=40)
@given(torus)
def test_loop_is_unitary(x):
    assert journe_loop_element().unitarity_defect((x,)) < 1e-12


def test_action_reproduces_smooth_system(MJ, Lp, smooth_negated):
    assert max_deviation(loop_act(Lp, MJ), smooth_negated, _sample()) < 1e-12


def test_quotient_round_trip(MJ, smooth_negated):
    L = loop_quotient(MJ, smooth_negated)
    pts = _sample(100)
    assert max_deviation(loop_act(L, MJ), smooth_negated, pts) < 1e-12
    assert max(L.unitarity_defect(w) for w in pts) < 1e-12


def test_self_quotient_is_identity(smooth_negated):
    L = loop_quotient(smooth_negated, smooth_negated)
    assert max(L.identity_deviation(w) for w in _sample(100)) < 1e-12


def test_action_is_associative(MJ, Lp):
    phase = diagonal_phase_loop(MJ.mp, MJ.scheme, [1, -2, 3])
    left = loop_act(phase.product(Lp), MJ)
    right = loop_act(phase, loop_act(Lp, MJ))
    assert max_deviation(left, right, _sample(100)) < 1e-12


def test_identity_acts_trivially(MJ):
    assert max_deviation(loop_act(identity_loop(MJ.mp, MJ.scheme), MJ), MJ, _sample(50)) == 0.0


@settings(max_examples=30)
@given(torus)
def test_section_is_unitary(x):
    sec = msystem_to_unitary_section(msystem_from_filters(journe_smooth()), (x,))
    assert sec.defect < 1e-10


def test_acted_system_is_a_valid_filter_system(MJ, Lp):
    rep = validate_system(filters_from_msystem(loop_act(Lp, MJ)), 256)
    assert rep.passed


def test_raw_smooth_phase_breaks_initial_condition(MJ):
    with pytest.raises(InitialConditionViolated):
        msystem_from_filters(journe_smooth(), canonical=MJ)
    msystem_from_filters(journe_smooth(highpass_sign=-1), canonical=MJ)


def test_multiplicity_mismatch(ex35, Lp):
    with pytest.raises(DimensionMismatch):
        loop_act(Lp, msystem_from_filters(ex35))


def test_filter_round_trip(journe):
    back = filters_from_msystem(msystem_from_filters(journe))
    for w in _sample(1000, seed=11):
        assert back.h_values(w) == journe.h_values(w)
        assert back.g_values(w) == journe.g_values(w)
