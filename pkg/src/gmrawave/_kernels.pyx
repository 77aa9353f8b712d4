# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels; same signatures as the NumPy fallback."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, M_PI

cnp.import_array()


def batched_matmul(cnp.complex128_t[:, :, ::1] P, cnp.complex128_t[:, :, ::1] F):
    cdef Py_ssize_t n = P.shape[0], r = P.shape[1], m = P.shape[2], c = F.shape[2]
    cdef Py_ssize_t t, i, j, k
    cdef double complex acc
    out = np.empty((n, r, c), dtype=np.complex128)
    cdef cnp.complex128_t[:, :, ::1] o = out
    for t in range(n):
        for i in range(r):
            for j in range(c):
                acc = 0
                for k in range(m):
                    acc = acc + P[t, i, k] * F[t, k, j]
                o[t, i, j] = acc
    return out


cdef inline double complex _piece_sum(double[::1] lo, double[::1] hi, cnp.complex128_t[::1] vals,
                                      double f) nogil:
    cdef Py_ssize_t p
    cdef double complex acc = 0
    cdef double w = 2.0 * M_PI * f
    cdef double complex e_hi, e_lo
    if f == 0.0:
        for p in range(lo.shape[0]):
            acc = acc + vals[p] * (hi[p] - lo[p])
        return acc
    for p in range(lo.shape[0]):
        e_hi = cos(w * hi[p]) - 1j * sin(w * hi[p])
        e_lo = cos(w * lo[p]) - 1j * sin(w * lo[p])
        acc = acc + vals[p] * (e_hi - e_lo)
    return acc / (-1j * w)


def exp_integrals(lo, hi, vals, freqs):
    cdef double[::1] lo_v = np.ascontiguousarray(lo, dtype=np.float64)
    cdef double[::1] hi_v = np.ascontiguousarray(hi, dtype=np.float64)
    cdef cnp.complex128_t[::1] val_v = np.ascontiguousarray(vals, dtype=np.complex128)
    cdef double[::1] f_v = np.ascontiguousarray(freqs, dtype=np.float64).ravel()
    out = np.empty(f_v.shape[0], dtype=np.complex128)
    cdef cnp.complex128_t[::1] o = out
    cdef Py_ssize_t t
    with nogil:
        for t in range(f_v.shape[0]):
            o[t] = _piece_sum(lo_v, hi_v, val_v, f_v[t])
    return out.reshape(np.shape(freqs))


def level_energy(lo, hi, vals, zmax):
    cdef double[::1] lo_v = np.ascontiguousarray(lo, dtype=np.float64)
    cdef double[::1] hi_v = np.ascontiguousarray(hi, dtype=np.float64)
    cdef cnp.complex128_t[::1] val_v = np.ascontiguousarray(vals, dtype=np.complex128)
    cdef long z, zm = int(zmax)
    cdef double total = 0.0
    cdef double complex s
    with nogil:
        for z in range(-zm, zm + 1):
            s = _piece_sum(lo_v, hi_v, val_v, <double>z)
            total += s.real * s.real + s.imag * s.imag
    return total
