from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gmrawave.cascade import scaling_vector
from gmrawave.errors import BoxTooSmall
from gmrawave.funcalg import indicator
from gmrawave.wavelet import (apply_SG, apply_SH, box_indicator, cuntz_residuals, frame_coefficient,
                              frame_gram_check, frame_sum_direct, frame_sum_FJ, norm_squared,
                              random_hvector, smoothness_proxy, synthesize_wavelets)

JOURNE_PSI = [(F(-16, 7), F(-2)), (F(-1, 2), F(-2, 7)), (F(2, 7), F(1, 2)), (F(2), F(16, 7))]


@pytest.fixture(scope="module")
def ex35_ws(ex35):
    return synthesize_wavelets(ex35, scaling_vector(ex35, 3, 256, 40))


@pytest.fixture(scope="module")
def journe_ws(journe):
    return synthesize_wavelets(journe, scaling_vector(journe, 4, 256, 64))


@pytest.fixture(scope="module")
def smooth_ws(journe_smooth):
    return synthesize_wavelets(journe_smooth, scaling_vector(journe_smooth, 4, 256, 64))


def test_ex35_wavelet(ex35_ws):
    assert ex35_ws.exact
    target = indicator([(F(-1, 2), F(-1, 4)), (F(1, 4), F(1, 2))], periodic=False)
    assert ex35_ws.psi[0].pieces == target


def test_journe_wavelet(journe_ws):
    assert journe_ws.psi[0].pieces == indicator(JOURNE_PSI, periodic=False)


def test_small_box_detected(journe):
    with pytest.raises(BoxTooSmall):
        synthesize_wavelets(journe, scaling_vector(journe, 0, 64, 20))


def test_ex35_frame_sum_is_exact(ex35_ws):
    f = box_indicator(F(-1, 4), F(1, 4))
    assert norm_squared(f) == 0.5
    assert frame_sum_FJ(ex35_ws, f, 20) == 0.5
    assert frame_sum_FJ(ex35_ws, f, 5) == 0.5


def test_frame_sums_are_monotone(ex35_ws):
    f = box_indicator(F(-1, 4), F(1, 4))
    vals = [frame_sum_FJ(ex35_ws, f, J) for J in range(-4, 3)]
    assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))
    assert vals[-1] == 0.5


def test_routes_agree(ex35_ws, journe_ws):
    f = box_indicator(F(-1, 4), F(1, 4))
    for ws in (ex35_ws, journe_ws):
        direct = frame_sum_direct(ws, f, 4, nMin=-20, zMax=2 ** 12)
        assert abs(direct - frame_sum_FJ(ws, f, 4)) < 1e-3


def test_single_coefficient(ex35_ws):
    f = box_indicator(F(-1, 4), F(1, 4))
    # level -1 sees fhat(y / 2) = 1 on the whole wavelet support, of measure 1/2
    assert abs(frame_coefficient(ex35_ws, f, -1, 0, 0) - 0.5 / 2 ** 0.5) < 1e-12
    assert frame_coefficient(ex35_ws, f, 0, 0, 0) == 0


def test_smooth_frame_sum_quadrature(smooth_ws):
    f = box_indicator(F(-1, 4), F(1, 4))
    assert abs(frame_sum_FJ(smooth_ws, f, 12) - 0.5) < 1e-3


def test_smoothness_proxy(smooth_ws, journe_ws):
    smooth = [smoothness_proxy(smooth_ws, 0, 2.0 ** -e, 3.0) for e in (7, 8, 9)]
    rough = [smoothness_proxy(journe_ws, 0, 2.0 ** -e, 3.0) for e in (7, 8, 9)]
    assert max(smooth) < 2 * min(smooth)
    assert rough[2] > 10 * rough[0]


@pytest.mark.parametrize("name, tol", [("ex35", 0.0), ("journe_canonical", 0.0), ("journe_smooth", 1e-12)])
def test_cuntz_relations(name, tol):
    from gmrawave.catalog import BUILTIN_SYSTEMS
    sys = BUILTIN_SYSTEMS[name]()
    rng = np.random.default_rng(7)
    samples = [(F(int(k), 1031),) for k in rng.integers(-515, 516, size=60)]
    for _ in range(2):
        res = cuntz_residuals(sys, random_hvector(sys, rng), random_hvector(sys, rng, tilde=True), samples)
        assert max(res.values()) <= tol, res


@settings(max_examples=25)
@given(st.integers(0, 2 ** 32 - 1), st.fractions(F(-1, 2), F(1, 2), max_denominator=997))
def test_isometry_ranges_are_orthogonal(seed, x):
    from gmrawave.catalog import journe_canonical
    sys = journe_canonical()
    rng = np.random.default_rng(seed)
    f, ft = random_hvector(sys, rng), random_hvector(sys, rng, tilde=True)
    # pointwise: <S_H f, S_G ft> summed over the N preimages vanishes
    total = 0
    for p in sys.scheme.preimages((x,)):
        a, b = apply_SH(sys, f, p), apply_SG(sys, ft, p)
        total = total + sum((u * v.conjugate() for u, v in zip(a, b)), 0)
    assert complex(total) == 0


def test_level_gram(journe_smooth):
    out = frame_gram_check(journe_smooth, levels=(0, 1), zs=(-1, 0, 1), gridQ=7 * 2 ** 8)
    assert out["max_deviation"] < 1e-3


def test_wavelet_against_itself(ex35_ws):
    psi = ex35_ws.psi[0].pieces
    assert abs(frame_coefficient(ex35_ws, psi, 0, 0, 0) - 0.5) < 1e-15
    assert abs(frame_sum_FJ(ex35_ws, psi, 20) - 0.5) < 1e-12
    assert abs(frame_sum_direct(ex35_ws, psi, 6, nMin=-10, zMax=2 ** 12) - 0.5) < 1e-3


def test_zero_function(ex35_ws):
    zero = indicator([], periodic=False)
    assert frame_sum_FJ(ex35_ws, zero, 5) == 0.0
    assert frame_sum_direct(ex35_ws, zero, 2, nMin=-3, zMax=64) == 0.0


def test_wavelets_vanish_at_origin(ex35_ws, journe_ws, smooth_ws):
    for ws in (ex35_ws, journe_ws, smooth_ws):
        assert abs(complex(ws.psi[0].value(0))) == 0


def test_lowpass_isometry_example(ex35):
    from gmrawave.wavelet import HVector, _h_support
    f = HVector([indicator([(F(-1, 2), F(1, 2))])], _h_support(ex35))
    assert complex(apply_SH(ex35, f, (F(1, 8),))[0]) == 0


def test_broken_system_breaks_orthogonality(ex35):
    from gmrawave.filters import FilterSystem
    broken = FilterSystem(ex35.scheme, ex35.mp, ex35.H, ex35.H, "broken")
    rng = np.random.default_rng(1)
    res = cuntz_residuals(broken, random_hvector(broken, rng), random_hvector(broken, rng, tilde=True),
                          [(F(k, 97),) for k in range(-48, 49)])
    assert res["SH*SG = 0"] > 0
