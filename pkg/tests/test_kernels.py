import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gmrawave import _kernels_py, kernels

compiled = pytest.importorskip("gmrawave._kernels")


def test_backend_selected():
    forced = os.environ.get("GMRAWAVE_PURE_PYTHON") == "1"
    assert kernels.BACKEND == ("python" if forced else "compiled")


@settings(max_examples=20)
@given(st.integers(0, 2 ** 31), st.integers(1, 30), st.integers(0, 300))
def test_backends_agree(seed, pieces, zmax):
    rng = np.random.default_rng(seed)
    cuts = np.sort(rng.uniform(-3, 3, pieces + 1))
    lo, hi = cuts[:-1], cuts[1:]
    vals = rng.standard_normal(pieces) + 1j * rng.standard_normal(pieces)
    freqs = np.arange(-zmax, zmax + 1, dtype=float)
    assert np.allclose(compiled.exp_integrals(lo, hi, vals, freqs),
                       _kernels_py.exp_integrals(lo, hi, vals, freqs), atol=1e-12)
    a, b = compiled.level_energy(lo, hi, vals, zmax), _kernels_py.level_energy(lo, hi, vals, zmax)
    assert abs(a - b) <= 1e-10 * max(1.0, abs(b))
    P = rng.standard_normal((5, 3, 3)) + 0j
    F = rng.standard_normal((5, 3, 3)) + 0j
    assert np.allclose(compiled.batched_matmul(P, F), _kernels_py.batched_matmul(P, F))


def test_level_energy_parseval_limit():
    # the full translation sum of |int_I e^{-2 pi i z x}|^2 over an interval of length 1/2 tends to 1/2
    val = _kernels_py.level_energy(np.array([-0.25]), np.array([0.25]), np.array([1 + 0j]), 2 ** 12)
    assert abs(val - 0.5) < 1e-4
