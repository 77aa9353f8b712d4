"""NumPy implementations of the numeric kernels (fallback for the compiled module)."""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


def batched_matmul(P, F):
    """Per-point matrix products ``P[n] @ F[n]``."""
    return np.matmul(P, F)


def exp_integrals(lo, hi, vals, freqs):
    """``sum_p vals[p] * int_{lo[p]}^{hi[p]} exp(-2 pi i f x) dx`` for each ``f``."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    vals = np.asarray(vals, dtype=complex)
    freqs = np.asarray(freqs, dtype=float)
    out = np.empty(freqs.shape, dtype=complex)
    zero = freqs == 0
    out[zero] = np.sum(vals * (hi - lo))
    f = freqs[~zero][:, None]
    if f.size:
        num = np.exp(-1j * TWO_PI * f * hi[None, :]) - np.exp(-1j * TWO_PI * f * lo[None, :])
        out[~zero] = (num / (-1j * TWO_PI * f)) @ vals
    return out


def level_energy(lo, hi, vals, zmax):
    """``sum_{|z| <= zmax} |sum_p vals[p] int_{lo[p]}^{hi[p]} exp(-2 pi i z x) dx|^2``."""
    total = 0.0
    block = 4096
    for start in range(-int(zmax), int(zmax) + 1, block):
        z = np.arange(start, min(start + block, int(zmax) + 1), dtype=float)
        total += float(np.sum(np.abs(exp_integrals(lo, hi, vals, z)) ** 2))
    return total
