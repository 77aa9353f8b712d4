import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gmrawave.errors import EpsilonTooLarge, InvalidInterval, OverlappingPieces
from gmrawave.exact import ExactValue
from gmrawave.funcalg import (Masked, PiecewiseFn, QmfHighpass, QmfLowpass, Shifted, indicator,
                              pc_from_pieces)
from gmrawave.intervals import IntervalSet

R2 = ExactValue.sqrt(2)
torus = st.fractions(min_value=F(-1, 2), max_value=F(1, 2), max_denominator=500)


def test_piece_validation():
    with pytest.raises(InvalidInterval):
        PiecewiseFn([(F(1, 4), F(1, 8), 1)])
    with pytest.raises(InvalidInterval):
        PiecewiseFn([(0, 1, 1)])
    with pytest.raises(OverlappingPieces):
        PiecewiseFn([(0, F(1, 4), 1), (F(1, 8), F(1, 2), 2)])


@given(st.fractions(min_value=-3, max_value=3, max_denominator=64))
def test_periodic_evaluation(x):
    f = pc_from_pieces([((F(1, 8), F(1, 4)), R2, True)])
    assert f.value(x) == f.value(x + 1)
    assert np.isclose(f.evaluate_many([float(x)])[0], complex(f.value(x)))


def test_symmetric_pieces():
    f = pc_from_pieces([((F(1, 8), F(1, 4)), 1, True)])
    assert f.support() == IntervalSet([(F(-1, 4), F(-1, 8)), (F(1, 8), F(1, 4))])


def test_line_function_algebra():
    f = indicator([(F(-1, 4), F(1, 4))], periodic=False)
    g = f.dilated(2)
    assert g.support() == IntervalSet([(F(-1, 8), F(1, 8))])
    assert f.product(g) == g
    assert f.integral() == F(1, 2)
    c = f.integral_against_exponential(1)
    assert math.isclose(c.real, math.sin(math.pi / 2) / math.pi, abs_tol=1e-15)


@given(torus)
def test_qmf_identity_exact_sum(x):
    p = QmfLowpass()
    s = abs(complex(p.value(x))) ** 2 + abs(complex(p.value(x + F(1, 2)))) ** 2
    assert abs(s - 2) < 1e-12


def test_qmf_identity_dense():
    p = QmfLowpass()
    xs = np.linspace(-0.5, 0.5, 10 ** 4, endpoint=False)
    s = np.abs(p.evaluate_many(xs)) ** 2 + np.abs(p.evaluate_many(xs + 0.5)) ** 2
    assert np.max(np.abs(s - 2)) < 1e-12


@given(torus)
def test_qmf_highpass_orthogonal_to_lowpass(x):
    p0 = QmfLowpass()
    p1 = QmfHighpass(p0)
    half = x + F(1, 2)
    cross = (complex(p0.value(x)) * complex(p1.value(x)).conjugate()
             + complex(p0.value(half)) * complex(p1.value(half)).conjugate())
    assert abs(cross) < 1e-12


def test_qmf_flat_regions_are_exact():
    p = QmfLowpass()
    assert p.value(0) == R2 or complex(p.value(0)) == complex(R2)
    assert complex(p.value(F(1, 7))) == 0
    assert complex(p.value(F(1, 2) - F(1, 100))) == 0
    assert p.flat_zero.contains(F(1, 7)) and p.flat_max.contains(F(1, 20))


def test_epsilon_bounds():
    with pytest.raises(EpsilonTooLarge):
        QmfLowpass(F(1, 50))
    with pytest.raises(InvalidInterval):
        QmfLowpass(0)


def test_qmf_is_smooth_across_ramps():
    p = QmfLowpass()
    for h in (1e-3, 1e-4):
        xs = np.linspace(0.05, 0.45, 4001)
        d2 = (p.evaluate_many(xs + h) - 2 * p.evaluate_many(xs) + p.evaluate_many(xs - h)) / h ** 2
        assert np.max(np.abs(d2)) < 1e5


def test_shift_and_mask():
    p = QmfLowpass()
    s = Shifted(p, F(1, 2))
    assert complex(s.value(0)) == complex(p.value(F(1, 2)))
    m = Masked(p, IntervalSet([(F(-1, 7), F(1, 7))]))
    assert complex(m.value(F(1, 5))) == 0
    assert complex(m.value(0)) == complex(p.value(0))
