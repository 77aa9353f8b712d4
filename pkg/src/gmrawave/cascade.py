"""Truncated infinite products and the generalized scaling vector.

``P^k(x) = prod_{q=1..k} H(B^{-q} x) / sqrt(N)`` with factors multiplied left
to right.  Once ``B^{-q} x`` lies in a neighborhood of 0 on which
``H = sqrt(N) E11`` every further factor leaves ``P`` unchanged, so the
product stabilizes after finitely many steps for the shipped examples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BoxTooSmall, ConfigError, NonConvergent
from .exact import ExactValue
from .filters import FilterSystem
from .funcalg import PiecewiseFn
from .kernels import batched_matmul
from .lattice import reduce_point

INCREMENT_TOL = 1e-8
IDENTICAL_TOL = 1e-15


@dataclass
class PartialProduct:
    x: tuple
    k: int
    matrix: np.ndarray
    stabilized_at: int | None = None
    exact: list | None = None


def _matmul_generic(P, F):
    n, m, c = len(P), len(F), len(F[0])
    return [[sum((P[i][t] * F[t][j] for t in range(m)), ExactValue()) for j in range(c)]
            for i in range(n)]


def _identity(c, exact):
    if exact:
        return [[ExactValue.rational(1 if i == j else 0) for j in range(c)] for i in range(c)]
    return np.eye(c, dtype=complex)


def _in_flat(sys: FilterSystem, y) -> bool:
    r = sys.flat_radius
    return r is not None and abs(y[0]) < r


def partial_product(sys: FilterSystem, x, k: int, shortcut: bool = True,
                    exact: bool = False) -> PartialProduct:
    """``P^k(x)``; with ``exact=True`` (exact systems only) entries stay exact."""
    if k < 0:
        raise ValueError("depth must be nonnegative")
    x = sys.scheme.point(x)
    exact = exact and sys.exact
    P = _identity(sys.c, exact)
    stab = None
    y = x
    for q in range(1, k + 1):
        y = sys.scheme.apply_B_inv(y)
        if exact:
            P = _matmul_generic(P, sys.factor_values(y))
        else:
            F = np.array([[complex(v) for v in row] for row in sys.factor_values(y)])
            P = P @ F
        if shortcut and sys.scheme.d == 1 and _in_flat(sys, y):
            stab = q
            break
    if exact:
        mat = np.array([[complex(v) for v in row] for row in P], dtype=complex)
        return PartialProduct(x, k, mat, stab, P)
    return PartialProduct(x, k, np.asarray(P, dtype=complex), stab)


def _points_array(sys, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if sys.scheme.d == 1:
        return xs.reshape(-1, 1)
    return xs.reshape(-1, sys.scheme.d)


def _float_B_inv(sys) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in sys.scheme.B_inv])


def cascade_many(sys: FilterSystem, xs, kmax: int, track: bool = False):
    """Float cascade at many points.

    Returns the products ``(n, c, c)`` and, with ``track=True``, the array of
    increments ``max |P^k - P^(k-1)|`` of shape ``(kmax, n)``.
    """
    pts = _points_array(sys, xs)
    n, c = pts.shape[0], sys.c
    P = np.broadcast_to(np.eye(c, dtype=complex), (n, c, c)).copy()
    incs = np.zeros((kmax, n)) if track else None
    binv = _float_B_inv(sys)
    scalar = sys.scheme.scalar
    y = pts.copy()
    r = sys.flat_radius
    for q in range(1, kmax + 1):
        y = y / scalar if scalar is not None else y @ binv.T
        F = sys.factor_many(y if sys.scheme.d > 1 else y[:, 0])
        newP = batched_matmul(np.ascontiguousarray(P), np.ascontiguousarray(F))
        if track:
            incs[q - 1] = np.max(np.abs(newP - P), axis=(1, 2))
        P = newP
        if r is not None and sys.scheme.d == 1 and not track and np.all(np.abs(y[:, 0]) < float(r)):
            break
    return (P, incs) if track else P


@dataclass
class ScalingVector:
    """Samples of the first column of the limiting product on ``B^K`` of the unit cube.

    ``points`` are exact sample locations and ``values`` has shape
    ``(n, c)``.  ``increments[k-1, p]`` is ``max |P^k - P^(k-1)|`` at point
    ``p`` and ``stabilized_at[p]`` the depth after which the product no
    longer changed (to within 1e-15).  ``exact_pieces`` holds the exact
    piecewise-constant first column on the box for exact one-dimensional
    systems.
    """

    sys: FilterSystem
    K: int
    gridQ: int
    kMax: int
    points: list
    values: np.ndarray
    increments: np.ndarray
    stabilized_at: np.ndarray
    exact_pieces: list | None = None
    box: tuple = field(default=None)

    @property
    def xs(self) -> np.ndarray:
        return np.array([[float(c) for c in p] for p in self.points])

    def evaluate(self, x) -> np.ndarray:
        """First column at one point (a fresh cascade, not a lookup)."""
        if self.exact_pieces is not None:
            t = Fraction(self.sys.scheme.point(x)[0])
            lo, hi = self.box
            if lo <= t < hi:
                return np.array([complex(f.value(t)) for f in self.exact_pieces])
        return partial_product(self.sys, x, self.kMax).matrix[:, 0]

    def evaluate_many(self, xs) -> np.ndarray:
        """First column at float points, shape ``(n, c)``."""
        return cascade_many(self.sys, xs, self.kMax)[:, :, 0]

    def exact_on(self, lo, hi) -> list:
        return exact_scaling_pieces(self.sys, lo, hi)

    def max_increment_by_depth(self) -> np.ndarray:
        return np.max(self.increments, axis=1) if self.increments.size else np.zeros(0)


def box_points(sys: FilterSystem, K: int, gridQ: int) -> list:
    """Sample points of ``B^K`` applied to the unit cube.

    In dimension one these are the multiples of ``1/gridQ`` in
    ``[-a^K/2, a^K/2)``.  In higher dimensions they are the images under
    ``B^K`` of the torus grid of denominator ``gridQ``.
    """
    scheme = sys.scheme
    if scheme.d == 1:
        half = Fraction(abs(scheme.scalar) ** K, 2)
        lo = math.ceil(-half * gridQ)
        hi = math.ceil(half * gridQ)
        return [(Fraction(j, gridQ),) for j in range(lo, hi)]
    return [scheme.apply_B_power(w, K) for w in scheme.grid(gridQ)]


def scaling_vector(sys: FilterSystem, K: int = 4, gridQ: int = 256, kMax: int = 64) -> ScalingVector:
    """Sample the generalized scaling vector and record convergence diagnostics."""
    if kMax < K + 10:
        raise ConfigError(f"kMax = {kMax} must be at least K + 10 = {K + 10}")
    pts = box_points(sys, K, gridQ)
    P, incs = cascade_many(sys, [[float(c) for c in p] for p in pts], kMax, track=True)
    final = incs[-1]
    bad = np.nonzero(final > INCREMENT_TOL)[0]
    if bad.size:
        p = pts[int(bad[0])]
        raise NonConvergent(f"increment {final[bad[0]]:.3g} at depth {kMax}", witness=p)
    changed = incs > IDENTICAL_TOL
    last = np.where(changed.any(axis=0), kMax - np.argmax(changed[::-1], axis=0), 0)
    exact = None
    box = None
    if sys.scheme.d == 1 and sys.piecewise and sys.exact and sys.flat_radius is not None \
            and sys.scheme.scalar > 0:
        half = Fraction(sys.scheme.scalar ** K, 2)
        box = (-half, half)
        exact = exact_scaling_pieces(sys, -half, half)
    return ScalingVector(sys, K, gridQ, kMax, pts, P[:, :, 0], incs, last, exact, box)


def _cascade_cuts(sys: FilterSystem, lo: Fraction, hi: Fraction, depth: int) -> list:
    a = sys.scheme.scalar
    bps = set()
    for f in sys.entries():
        bps.update(f.breakpoints())
    cuts = {lo, hi}
    for q in range(1, depth + 1):
        scale = Fraction(a) ** q
        # t + n ranges over [lo / a^q, hi / a^q]
        n_lo = math.floor(lo / scale) - 1
        n_hi = math.ceil(hi / scale) + 1
        for t in bps:
            for n in range(n_lo, n_hi + 1):
                x = scale * (t + n)
                if lo < x < hi:
                    cuts.add(x)
    return sorted(cuts)


def exact_scaling_pieces(sys: FilterSystem, lo, hi) -> list:
    """Exact first column of the infinite product on ``[lo, hi)`` as line functions."""
    lo, hi = Fraction(lo), Fraction(hi)
    r = sys.flat_radius
    a = sys.scheme.scalar
    if r is None or not sys.exact or not sys.piecewise or a is None or a <= 0:
        raise ValueError("exact cascade needs an exact piecewise system with a flat origin")
    R = max(abs(lo), abs(hi))
    depth = 1
    while R / Fraction(a) ** depth >= r:
        depth += 1
    cuts = _cascade_cuts(sys, lo, hi, depth)
    cols = [[] for _ in range(sys.c)]
    for left, right in zip(cuts, cuts[1:]):
        P = partial_product(sys, (left,), depth, shortcut=False, exact=True).exact
        for i in range(sys.c):
            cols[i].append((left, right, P[i][0]))
    return [PiecewiseFn([p for p in col if not p[2].is_zero()], 0, periodic=False).merged()
            for col in cols]


def refinement_residual(sys: FilterSystem, sv: ScalingVector, xs=None) -> float:
    """``max |sqrt(N) phi(Bx) - H(x) phi(x)|`` over points whose image stays in the box."""
    if xs is None:
        pts = sv.xs
        if sys.scheme.d == 1:
            a = float(sys.scheme.scalar)
            xs = pts[np.abs(pts[:, 0] * a) < np.max(np.abs(pts[:, 0]))]
        else:
            xs = pts[: max(1, len(pts) // 4)]
    xs = _points_array(sys, xs)
    B = np.array([[float(v) for v in row] for row in sys.scheme.B])
    bx = xs @ B.T
    lhs = math.sqrt(sys.N) * sv.evaluate_many(bx if sys.scheme.d > 1 else bx[:, 0])
    phi = sv.evaluate_many(xs if sys.scheme.d > 1 else xs[:, 0])
    Hx = sys.factor_many(xs if sys.scheme.d > 1 else xs[:, 0]) * math.sqrt(sys.N)
    rhs = np.einsum("nij,nj->ni", Hx, phi)
    return float(np.max(np.abs(lhs - rhs), initial=0.0))


def l2_bound_check(sys: FilterSystem, i: int, k: int, gridQ: int = 256):
    """Midpoint estimate of ``sum_j int_{B^k Q} |P^k_ij|^2``; returns ``(value, slack, passed)``.

    One-dimensional systems only.
    """
    if sys.scheme.d != 1:
        raise ValueError("the L2 bound check is implemented for d = 1")
    a = abs(sys.scheme.scalar)
    half = a ** k / 2
    n = int(round(2 * half * gridQ))
    mids = -half + (np.arange(n) + 0.5) / gridQ
    P = _product_exact_depth(sys, mids, k)
    val = float(np.sum(np.abs(P[:, i - 1, :]) ** 2) / gridQ)
    slack = 10.0 / gridQ
    return val, slack, val <= 1.0 + slack


def _product_exact_depth(sys, xs, k):
    pts = _points_array(sys, xs)
    n, c = pts.shape[0], sys.c
    P = np.broadcast_to(np.eye(c, dtype=complex), (n, c, c)).copy()
    y = pts[:, 0]
    for _ in range(k):
        y = y / sys.scheme.scalar
        P = batched_matmul(np.ascontiguousarray(P), np.ascontiguousarray(sys.factor_many(y)))
    return P


def translate_norm_profile(sv: ScalingVector, i: int, zMax: int, grid) -> np.ndarray:
    """``w -> sum_{|z| <= zMax} |phi_i(w + z)|^2`` at the torus points ``grid`` (d = 1)."""
    sys = sv.sys
    if sys.scheme.d != 1:
        raise ValueError("translate-norm profiles are implemented for d = 1")
    half = abs(sys.scheme.scalar) ** sv.K / 2
    if zMax + 0.5 > half:
        raise BoxTooSmall(f"zMax = {zMax} needs a box of half-width {zMax + 0.5}, have {half}")
    w = np.array([float(reduce_point(sys.scheme.point(p))[0]) for p in grid])
    zs = np.arange(-zMax, zMax + 1, dtype=float)
    pts = (w[:, None] + zs[None, :]).ravel()
    vals = sv.evaluate_many(pts)[:, i - 1].reshape(len(w), len(zs))
    return np.sum(np.abs(vals) ** 2, axis=1)
