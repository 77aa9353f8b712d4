"""Wavelet synthesis, Parseval frame sums and the filter-bank isometries.

All frequency-domain objects are one-dimensional here except the pointwise
operators ``S_H``, ``S_G`` and their adjoints, which work in any dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cascade import ScalingVector, exact_scaling_pieces, scaling_vector
from .errors import BoxTooSmall
from .exact import ExactValue, is_zero
from .filters import FilterSystem, residual
from .funcalg import PiecewiseFn, pc_from_pieces
from .kernels import level_energy
from .lattice import reduce_scalar
from .parallel import pmap

DEFAULT_ZMAX = 2 ** 14
DEFAULT_NMIN = -30
DEFAULT_FJ_GRID = 2 ** 12
GRAM_GRID = 7 * 2 ** 10


class PsiHat:
    """One synthesized wavelet in the frequency domain.

    ``pieces`` is the exact line function when available; otherwise values
    come from a fresh cascade at each requested point.
    """

    def __init__(self, ws: "WaveletSystem", k: int, pieces: PiecewiseFn | None):
        self.ws = ws
        self.k = k
        self.pieces = pieces

    def value(self, x):
        if self.pieces is not None:
            return self.pieces.value(Fraction(x))
        return complex(self.evaluate_many(np.array([float(x)]))[0])

    def evaluate_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float).ravel()
        if self.pieces is not None:
            return self.pieces.evaluate_many(xs)
        sys = self.ws.sys
        a = float(sys.scheme.scalar)
        y = xs / a
        phi = self.ws.phi.evaluate_many(y)
        g = np.stack([f.evaluate_many(y) for f in sys.G[self.k]], axis=1)
        out = np.sum(g * phi, axis=1) / math.sqrt(sys.N)
        out[np.abs(xs) >= self.ws.half_width] = 0
        return out


@dataclass
class WaveletSystem:
    sys: FilterSystem
    phi: ScalingVector
    psi: list
    half_width: float

    @property
    def exact(self) -> bool:
        return all(p.pieces is not None for p in self.psi)


def _phi_support_ok(sv: ScalingVector) -> bool:
    if sv.exact_pieces is not None:
        # the pieces on the box alone cannot reveal support just outside it
        lo, hi = sv.box
        a = sv.sys.scheme.scalar
        wide = exact_scaling_pieces(sv.sys, lo * a, hi * a)
        return all(not f.pieces or (f.pieces[0][0] > lo and f.pieces[-1][1] < hi) for f in wide)
    x = sv.xs[:, 0]
    edge = np.abs(x) > 0.9 * np.max(np.abs(x))
    return bool(np.max(np.abs(sv.values[edge]), initial=0.0) < 1e-12)


def synthesize_wavelets(sys: FilterSystem, sv: ScalingVector | None = None) -> WaveletSystem:
    """``psi_k(x) = N^(-1/2) sum_j g_kj(x / a) phi_j(x / a)`` on ``a`` times the scaling box.

    Raises :class:`BoxTooSmall` when the scaling vector does not vanish near
    the edge of its box, since the wavelet would then be truncated.
    """
    if sys.scheme.d != 1:
        raise ValueError("wavelet synthesis is implemented for d = 1")
    sv = sv or scaling_vector(sys)
    if not _phi_support_ok(sv):
        raise BoxTooSmall("scaling vector does not vanish near the edge of its box; raise K")
    a = sys.scheme.scalar
    half = Fraction(abs(a) ** (sv.K + 1), 2)
    ws = WaveletSystem(sys, sv, [], float(half))
    for k in range(sys.c_tilde):
        pieces = None
        if sv.exact_pieces is not None and a > 0:
            pieces = _exact_psi(sys, sv, k, half)
        ws.psi.append(PsiHat(ws, k, pieces))
    return ws


def _exact_psi(sys, sv, k, half) -> PiecewiseFn:
    a = sys.scheme.scalar
    cuts = {-half, half}
    for f in sv.exact_pieces:
        for lo, hi, _ in f.pieces:
            cuts.update({a * lo, a * hi})
    for g in sys.G[k]:
        for t in g.breakpoints():
            for n in range(math.floor(-half / a) - 1, math.ceil(half / a) + 2):
                x = a * (t + n)
                if -half < x < half:
                    cuts.add(x)
    cuts = sorted(c for c in cuts if -half <= c <= half)
    inv = sys.inv_sqrt_n
    out = []
    for lo, hi in zip(cuts, cuts[1:]):
        y = lo / a
        val = ExactValue()
        for j, g in enumerate(sys.G[k]):
            val = val + g.value(y) * sv.exact_pieces[j].value(y)
        val = val * inv
        if not val.is_zero():
            out.append((lo, hi, val))
    return PiecewiseFn(out, 0, periodic=False).merged()


def smoothness_proxy(ws: WaveletSystem, k: int, h: float, span: float | None = None) -> float:
    """``max |psi(x+h) - 2 psi(x) + psi(x-h)| / h^2`` over a grid of step ``h`` on ``[-span, span]``.

    The grid is offset by an irrational fraction of ``h`` so nodes avoid
    rational breakpoints.  The value stays bounded under refinement for a
    twice differentiable wavelet and grows like ``h^-2`` across a jump.
    """
    span = ws.half_width if span is None else span
    offset = h * (math.sqrt(2) - 1)
    xs = np.arange(-span, span, h) + offset
    psi = ws.psi[k]
    d2 = psi.evaluate_many(xs + h) - 2 * psi.evaluate_many(xs) + psi.evaluate_many(xs - h)
    return float(np.max(np.abs(d2)) / h ** 2)


# ---------------------------------------------------------------------------
# frame coefficients


def _dilation_factor(ws) -> Fraction:
    a = ws.sys.scheme.scalar
    if a is None or a <= 0:
        raise ValueError("frame sums are implemented for d = 1 and a positive dilation")
    return Fraction(a)


def _level_function(ws, fhat: PiecewiseFn, n: int, k: int) -> PiecewiseFn:
    """``y -> fhat(a^n y) * conj(psi_k(y))`` as an exact line function."""
    a = _dilation_factor(ws)
    return fhat.dilated(a ** n).product(ws.psi[k].pieces.conj())


def frame_coefficient(ws: WaveletSystem, fhat: PiecewiseFn, n: int, k: int, z: int) -> complex:
    """``<fhat, psi_{n,k,z} hat>`` (``k`` is 0-based)."""
    a = float(_dilation_factor(ws))
    if ws.psi[k].pieces is not None:
        q = _level_function(ws, fhat, n, k)
        return a ** (n / 2) * q.integral_against_exponential(z)
    ys, w, vals = _level_samples(ws, fhat, n, k, _quadrature_nodes(ws))
    return a ** (n / 2) * complex(np.sum(vals * np.exp(-2j * np.pi * z * ys)) * w)


def _pieces_arrays(q: PiecewiseFn):
    if not q.pieces:
        return None
    return q.arrays()


def _quadrature_nodes(ws, per_unit: int = 2 ** 12):
    half = ws.half_width
    n = int(2 * half * per_unit)
    ys = -half + (np.arange(n) + 0.5) / per_unit
    return ys, 1.0 / per_unit


def _level_samples(ws, fhat, n, k, nodes):
    ys, w = nodes
    a = float(_dilation_factor(ws))
    psi = ws.psi[k].evaluate_many(ys)
    vals = fhat.evaluate_many(ys * a ** n) * np.conj(psi)
    return ys, w, vals


def _periodized_energy(ys, w, vals, zmax) -> float:
    """``sum_{|z| <= zmax} |sum vals exp(-2 pi i z y) w|^2`` via one FFT of the periodization."""
    m = 1
    while m < 4 * zmax + 2:
        m *= 2
    per = np.zeros(m, dtype=complex)
    idx = np.floor(ys * m).astype(np.int64) % m
    np.add.at(per, idx, vals * w)
    # node y sits at idx / m + offset; the offset is common when ys is a uniform grid
    coeffs = np.fft.fft(per)
    offset = ys[0] - math.floor(ys[0] * m) / m
    z = np.fft.fftfreq(m, d=1.0 / m)
    coeffs = coeffs * np.exp(-2j * np.pi * z * offset)
    keep = np.abs(z) <= zmax
    return float(np.sum(np.abs(coeffs[keep]) ** 2))


def level_contribution(ws: WaveletSystem, fhat: PiecewiseFn, n: int, zMax: int) -> float:
    """``sum_k sum_{|z| <= zMax} |<f, psi_{n,k,z}>|^2``."""
    a = float(_dilation_factor(ws))
    total = 0.0
    for k in range(len(ws.psi)):
        if ws.psi[k].pieces is not None:
            q = _level_function(ws, fhat, n, k)
            arrs = _pieces_arrays(q)
            if arrs is None:
                continue
            total += a ** n * level_energy(arrs[0], arrs[1], arrs[2], zMax)
        else:
            nodes = _psi_nodes(ws, zMax)
            ys, w = nodes
            vals = fhat.evaluate_many(ys * a ** n) * np.conj(_psi_cache(ws, k, ys))
            total += a ** n * _periodized_energy(ys, w, vals, zMax)
    return total


def _psi_nodes(ws, zMax):
    per_unit = 1
    while per_unit < 4 * zMax + 2:
        per_unit *= 2
    key = ("nodes", per_unit)
    cache = ws.__dict__.setdefault("_cache", {})
    if key not in cache:
        cache[key] = _quadrature_nodes(ws, per_unit)
    return cache[key]


def _psi_cache(ws, k, ys):
    cache = ws.__dict__.setdefault("_cache", {})
    key = ("psi", k, len(ys))
    if key not in cache:
        cache[key] = ws.psi[k].evaluate_many(ys)
    return cache[key]


def frame_sum_direct(ws: WaveletSystem, fhat: PiecewiseFn, J: int, nMin: int = DEFAULT_NMIN,
                     zMax: int = DEFAULT_ZMAX) -> float:
    """``sum_{n=nMin..J} sum_k sum_{|z| <= zMax} |<f, psi_{n,k,z}>|^2``."""
    levels = pmap(lambda n: level_contribution(ws, fhat, n, zMax), range(nMin, J + 1), chunk=1)
    return float(math.fsum(levels))


def _phi_exact(ws):
    return ws.phi.exact_pieces


def frame_sum_FJ(ws: WaveletSystem, fhat: PiecewiseFn, J: int, gridQ: int = DEFAULT_FJ_GRID) -> float:
    """``||F^J||^2`` with ``F^J_j(w) = sqrt(N)^(1+J) sum_zeta fhat(s (w + zeta)) conj(phi_j(w + zeta))``.

    ``s = a^(1+J)``.  This equals the full translation sum of the frame
    coefficients over levels ``n <= J``.  Exact for exact piecewise data,
    midpoint quadrature with ``gridQ`` nodes per cell otherwise.
    """
    a = _dilation_factor(ws)
    s = a ** (1 + J)
    sv = ws.phi
    if not fhat.pieces:
        return 0.0
    lo = fhat.pieces[0][0] / s
    hi = fhat.pieces[-1][1] / s
    box_lo, box_hi = -Fraction(abs(a) ** sv.K, 2), Fraction(abs(a) ** sv.K, 2)
    if lo < box_lo or hi > box_hi:
        raise BoxTooSmall(f"pulled-back support [{lo}, {hi}) leaves the scaling box")
    fpull = fhat.dilated(s)
    cuts = {Fraction(-1, 2)}
    for p_lo, p_hi, _ in fpull.pieces:
        cuts.update({reduce_scalar(p_lo), reduce_scalar(p_hi)})
    exact = _phi_exact(ws)
    if exact is not None:
        for f in exact:
            for p_lo, p_hi, _ in f.pieces:
                if p_hi > lo and p_lo < hi:
                    cuts.update({reduce_scalar(p_lo), reduce_scalar(p_hi)})
    cuts = sorted(cuts) + [Fraction(1, 2)]
    shifts = range(math.floor(lo) - 1, math.ceil(hi) + 2)
    c = ws.sys.c
    if exact is not None and all(isinstance(v, ExactValue) for _, _, v in fpull.pieces):
        total = ExactValue()
        for left, right in zip(cuts, cuts[1:]):
            for j in range(c):
                acc = ExactValue()
                for z in shifts:
                    y = left + z
                    fv = fpull.value(y)
                    if is_zero(fv):
                        continue
                    acc = acc + fv * exact[j].value(y).conjugate()
                total = total + acc.abs2() * (right - left)
        return float((total * s).__complex__().real)
    total = 0.0
    for left, right in zip(cuts, cuts[1:]):
        width = float(right - left)
        ws_nodes = float(left) + (np.arange(gridQ) + 0.5) * width / gridQ
        acc = np.zeros((gridQ, c), dtype=complex)
        for z in shifts:
            y = ws_nodes + z
            fv = fpull.evaluate_many(y)
            if not np.any(fv):
                continue
            acc += fv[:, None] * np.conj(sv.evaluate_many(y))
        total += float(np.sum(np.abs(acc) ** 2)) * width / gridQ
    return total * float(s)


def box_indicator(lo, hi) -> PiecewiseFn:
    """``chi_[lo, hi)`` as a line function with exact value 1."""
    return pc_from_pieces([((Fraction(lo), Fraction(hi)), 1)], periodic=False)


def norm_squared(fhat: PiecewiseFn) -> float:
    return float(sum(abs(complex(v)) ** 2 * float(hi - lo) for lo, hi, v in fhat.pieces))


# ---------------------------------------------------------------------------
# the isometries S_H and S_G


class HVector:
    """Vector of torus functions; component ``j`` is forced to vanish off ``S_j``."""

    def __init__(self, components, supports):
        self.components = tuple(components)
        self.supports = supports

    def value(self, w) -> list:
        return [f.value(w) if self.supports(j + 1, w) else ExactValue()
                for j, f in enumerate(self.components)]

    def __len__(self):
        return len(self.components)


def _mul(a, b):
    if is_zero(a) or is_zero(b):
        return ExactValue()
    return a * b


def _h_support(sys):
    return lambda j, w: sys.mp.m.value(w) >= j


def _g_support(sys):
    return lambda k, w: sys.mp.m_tilde.value(w) >= k


def apply_SH(sys: FilterSystem, f, w) -> list:
    """``[S_H f](w)_j = sum_i h_ij(w) f_i(alpha(w))`` on ``S_j``, else 0."""
    fa = f(sys.scheme.alpha(w)) if callable(f) else f.value(sys.scheme.alpha(w))
    hv = sys.h_values(w)
    m = sys.mp.m.value(w)
    return [sum((_mul(hv[i][j], fa[i]) for i in range(sys.c)), ExactValue()) if m >= j + 1
            else ExactValue() for j in range(sys.c)]


def apply_SG(sys: FilterSystem, f, w) -> list:
    """``[S_G f](w)_j = sum_k g_kj(w) f_k(alpha(w))`` on ``S_j``, else 0."""
    fa = f(sys.scheme.alpha(w)) if callable(f) else f.value(sys.scheme.alpha(w))
    gv = sys.g_values(w)
    m = sys.mp.m.value(w)
    return [sum((_mul(gv[k][j], fa[k]) for k in range(sys.c_tilde)), ExactValue()) if m >= j + 1
            else ExactValue() for j in range(sys.c)]


def _adjoint(sys, rows_of, size, support, f, w):
    pre = sys.scheme.preimages(w)
    inv_n = ExactValue.rational(Fraction(1, sys.N))
    out = []
    for i in range(size):
        if not support(i + 1, w):
            out.append(ExactValue())
            continue
        acc = ExactValue()
        for p in pre:
            fp = f(p) if callable(f) else f.value(p)
            row = rows_of(p)[i]
            for j in range(sys.c):
                acc = acc + _mul(row[j].conjugate(), fp[j])
        out.append(acc * inv_n)
    return out


def apply_SH_star(sys: FilterSystem, f, w) -> list:
    """``[S_H^* f](w)_i = (1/N) sum_l sum_j conj(h_ij(w_l)) f_j(w_l)`` on ``S_i``."""
    return _adjoint(sys, sys.h_values, sys.c, _h_support(sys), f, w)


def apply_SG_star(sys: FilterSystem, f, w) -> list:
    """``[S_G^* f](w)_k = (1/N) sum_l sum_j conj(g_kj(w_l)) f_j(w_l)`` on the ``k``-th complement set."""
    return _adjoint(sys, sys.g_values, sys.c_tilde, _g_support(sys), f, w)


def _vec_residual(u, v) -> float:
    return max((residual(a - b) for a, b in zip(u, v)), default=0.0)


def cuntz_residuals(sys: FilterSystem, f: HVector, f_tilde: HVector, samples) -> dict:
    """Maxima over ``samples`` of the four pointwise isometry relations."""
    zero = [ExactValue()] * sys.c

    def at(w):
        fw = f.value(w)
        r1 = _vec_residual(apply_SH_star(sys, lambda p: apply_SH(sys, f, p), w), fw)
        r2 = _vec_residual(apply_SG_star(sys, lambda p: apply_SG(sys, f_tilde, p), w),
                           f_tilde.value(w))
        r3 = _vec_residual(apply_SH_star(sys, lambda p: apply_SG(sys, f_tilde, p), w), zero)
        sh = apply_SH(sys, lambda p: apply_SH_star(sys, f, p), w)
        sg = apply_SG(sys, lambda p: apply_SG_star(sys, f, p), w)
        r4 = _vec_residual([x + y for x, y in zip(sh, sg)], fw)
        return r1, r2, r3, r4

    res = pmap(at, list(samples))
    names = ("SH*SH = I", "SG*SG = I", "SH*SG = 0", "SH SH* + SG SG* = I")
    return {name: max((r[i] for r in res), default=0.0) for i, name in enumerate(names)}


def random_hvector(sys: FilterSystem, rng, tilde: bool = False, cells: int = 8,
                   den: int = 64) -> HVector:
    """Random exact piecewise-constant test vector with Gaussian-rational values (d = 1)."""
    size = sys.c_tilde if tilde else sys.c
    support = _g_support(sys) if tilde else _h_support(sys)
    comps = []
    for _ in range(size):
        ks = sorted(set(int(k) for k in rng.integers(-den // 2 + 1, den // 2, size=cells - 1)))
        edges = [Fraction(-1, 2)] + [Fraction(k, den) for k in ks] + [Fraction(1, 2)]
        pieces = []
        for lo, hi in zip(edges, edges[1:]):
            re, im = rng.integers(-9, 10, size=2)
            q = int(rng.integers(1, 8))
            pieces.append((lo, hi, ExactValue.rational(Fraction(int(re), q), Fraction(int(im), q))))
        comps.append(PiecewiseFn(pieces, 0, periodic=True))
    return HVector(comps, support)


# ---------------------------------------------------------------------------
# coarse Gram check of the level decomposition


def _sh_many(sys, fn, ws):
    """Vectorized ``S_H`` for float torus points ``ws`` (d = 1)."""
    a = sys.scheme.scalar
    al = ws * a
    al = al - np.floor(al + 0.5)
    fa = fn(al)
    H = np.stack([np.stack([f.evaluate_many(ws) for f in row], axis=1) for row in sys.H], axis=1)
    out = np.einsum("nij,ni->nj", H, fa)
    m = _m_many(sys.mp.m, ws)
    for j in range(sys.c):
        out[m < j + 1, j] = 0
    return out


def _sg_many(sys, fn, ws):
    a = sys.scheme.scalar
    al = ws * a
    al = al - np.floor(al + 0.5)
    fa = fn(al)
    G = np.stack([np.stack([f.evaluate_many(ws) for f in row], axis=1) for row in sys.G], axis=1)
    out = np.einsum("nkj,nk->nj", G, fa)
    m = _m_many(sys.mp.m, ws)
    for j in range(sys.c):
        out[m < j + 1, j] = 0
    return out


def _m_many(m, ws):
    los = np.array([float(p[0]) for p in m.pieces])
    vals = np.array([p[2] for p in m.pieces])
    idx = np.searchsorted(los, ws, side="right") - 1
    return vals[np.clip(idx, 0, len(vals) - 1)]


def frame_gram_check(sys: FilterSystem, levels=(0, 1, 2), zs=(-1, 0, 1),
                     gridQ: int = GRAM_GRID) -> dict:
    """Gram matrix of ``S_H^n S_G e_{k,z}`` against its predicted pattern.

    ``e_{k,z}(w) = exp(2 pi i z w)`` on the ``k``-th complement set.  Since
    ``S_H`` and ``S_G`` are isometries with orthogonal ranges, the Gram
    entry between ``(n, k, z)`` and ``(n', k', z')`` is
    ``delta_{n n'} delta_{k k'} int exp(2 pi i (z - z') w)`` over that set.
    Integrals use the midpoint rule with ``gridQ`` nodes.
    """
    if sys.scheme.d != 1:
        raise ValueError("the Gram check is implemented for d = 1")
    ws = -0.5 + (np.arange(gridQ) + 0.5) / gridQ
    labels = [(n, k, z) for n in levels for k in range(sys.c_tilde) for z in zs]
    mt_pieces = sys.mp.m_tilde

    def e_fn(k, z):
        def fn(x):
            out = np.zeros((len(x), sys.c_tilde), dtype=complex)
            inside = _m_many(mt_pieces, x) >= k + 1
            out[inside, k] = np.exp(2j * np.pi * z * x[inside])
            return out
        return fn

    vecs = []
    for n, k, z in labels:
        fn = e_fn(k, z)

        def level0(x, fn=fn):
            return _sg_many(sys, fn, x)

        current = level0
        for _ in range(n):
            current = (lambda prev: (lambda x: _sh_many(sys, prev, x)))(current)
        vecs.append(current(ws))
    V = np.stack(vecs, axis=0)
    gram = np.einsum("anj,bnj->ab", V, np.conj(V)) / gridQ
    expected = np.zeros_like(gram)
    for a_, (n, k, z) in enumerate(labels):
        for b_, (n2, k2, z2) in enumerate(labels):
            if n == n2 and k == k2:
                expected[a_, b_] = _set_fourier(mt_pieces, k + 1, z - z2)
    return {"labels": labels, "gram": gram, "expected": expected,
            "max_deviation": float(np.max(np.abs(gram - expected)))}


def _set_fourier(m, k, dz) -> complex:
    """``int exp(2 pi i dz w)`` over ``{m >= k}``."""
    total = 0j
    for lo, hi, v in m.pieces:
        if v < k:
            continue
        lo, hi = float(lo), float(hi)
        if dz == 0:
            total += hi - lo
        else:
            total += (np.exp(2j * np.pi * dz * hi) - np.exp(2j * np.pi * dz * lo)) / (2j * np.pi * dz)
    return total
