"""Generalized low- and high-pass filter systems and their verification.

A :class:`FilterSystem` holds the ``c x c`` low-pass matrix ``H`` and the
``c_tilde x c`` high-pass matrix ``G``.  Column ``j`` of either matrix lives
on ``S_j = {m >= j}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import (CompletionFailed, DimensionMismatch, LipschitzSuspect, LowPassViolation,
                     SupportViolation)
from .exact import ExactValue, is_zero
from .funcalg import FilterFn, Sampled, ZeroFn
from .lattice import DilationScheme
from .multiplicity import MultiplicityPair
from .parallel import pmap
from .report import Report

FLOAT_TOL = 1e-10
SUPPORT_TOL = 1e-12
LIPSCHITZ_THRESHOLD = 1e6


def default_grid_q(d: int) -> int:
    return 7 * 2 ** 8 if d == 1 else 16


def residual(v) -> float:
    """``|v|``, returning exactly 0.0 for exact zeros."""
    if isinstance(v, ExactValue):
        return 0.0 if v.is_zero() else abs(complex(v))
    return abs(complex(v))


def _conj(v):
    return v.conjugate()


def _dot(us, vs):
    """``sum u * conj(v)`` in whatever arithmetic the values carry."""
    total = 0
    for u, v in zip(us, vs):
        if is_zero(u) or is_zero(v):
            continue
        total = total + u * _conj(v)
    return total


class FilterSystem:
    """Matrices ``H`` (``c x c``) and ``G`` (``c_tilde x c``) of torus functions."""

    def __init__(self, scheme: DilationScheme, mp: MultiplicityPair, H, G, name: str = ""):
        self.scheme = scheme
        self.mp = mp
        self.H = tuple(tuple(row) for row in H)
        self.G = tuple(tuple(row) for row in G)
        self.name = name

    @property
    def c(self) -> int:
        return len(self.H)

    @property
    def c_tilde(self) -> int:
        return len(self.G)

    @property
    def N(self) -> int:
        return self.scheme.N

    def entries(self):
        for row in self.H:
            yield from row
        for row in self.G:
            yield from row

    @cached_property
    def exact(self) -> bool:
        """All entries return exact values."""
        return all(f.exact for f in self.entries())

    @cached_property
    def piecewise(self) -> bool:
        """All entries are piecewise constant with known breakpoints (d = 1)."""
        return self.scheme.d == 1 and all(f.breakpoints() is not None for f in self.entries())

    @cached_property
    def inv_sqrt_n(self) -> ExactValue:
        return ExactValue.sqrt(Fraction(1, self.N))

    def h_values(self, w):
        return [[f.value(w) for f in row] for row in self.H]

    def g_values(self, w):
        return [[f.value(w) for f in row] for row in self.G]

    def factor_values(self, w):
        """Entries of ``H(w) / sqrt(N)``; exact when the entries are exact."""
        out = []
        root = math.sqrt(self.N)
        for row in self.H:
            vals = []
            for f in row:
                v = f.value(w)
                vals.append(v * self.inv_sqrt_n if isinstance(v, ExactValue) else complex(v) / root)
            out.append(vals)
        return out

    def factor_many(self, xs) -> np.ndarray:
        """``H(x) / sqrt(N)`` at float points, shape ``(n, c, c)``."""
        xs = np.asarray(xs, dtype=float)
        n = xs.shape[0]
        out = np.empty((n, self.c, self.c), dtype=complex)
        for i, row in enumerate(self.H):
            for j, f in enumerate(row):
                out[:, i, j] = f.evaluate_many(xs)
        return out / math.sqrt(self.N)

    def in_s(self, j: int, w) -> bool:
        return self.mp.m.value(w) >= j

    @cached_property
    def flat_radius(self):
        """Radius ``r`` with ``H = sqrt(N) E11`` on ``|x| < r``, or ``None`` (d = 1)."""
        if self.scheme.d != 1:
            return None
        root = ExactValue.sqrt(self.N)
        radius = None
        for i, row in enumerate(self.H):
            for j, f in enumerate(row):
                got = f.constant_near(Fraction(0))
                if got is None:
                    return None
                val, r = got
                target = root if (i == 0 and j == 0) else ExactValue()
                if isinstance(val, ExactValue):
                    ok = val == target
                else:
                    ok = complex(val) == complex(target) if (i or j) else complex(val) == math.sqrt(self.N)
                if not ok:
                    return None
                if r is not None:
                    radius = r if radius is None else min(radius, r)
        return radius

    def __repr__(self):
        return f"FilterSystem({self.name or 'unnamed'}, c={self.c}, c_tilde={self.c_tilde})"


# ---------------------------------------------------------------------------
# construction and structural checks


def _origin(scheme):
    return tuple(Fraction(0) for _ in range(scheme.d))


def lipschitz_estimate(sys: FilterSystem) -> float:
    """Largest difference quotient ``|h(x) - h(0)| / |x|`` at ``x = +-2^-k e_i``, k = 4..20."""
    d = sys.scheme.d
    zero = _origin(sys.scheme)
    h0 = [[complex(v) for v in row] for row in sys.h_values(zero)]
    worst = 0.0
    for k in range(4, 21):
        step = Fraction(1, 2 ** k)
        for axis in range(d):
            for sign in (1, -1):
                x = tuple(sign * step if a == axis else Fraction(0) for a in range(d))
                hx = sys.h_values(x)
                for i in range(sys.c):
                    for j in range(sys.c):
                        q = abs(complex(hx[i][j]) - h0[i][j]) / float(step)
                        worst = max(worst, q)
    return worst


def check_support(sys: FilterSystem, grid) -> tuple | None:
    """First ``(point, entry)`` where a column-``j`` entry is nonzero off ``S_j``."""
    for w in grid:
        m = sys.mp.m.value(w)
        for j in range(m, sys.c):
            for name, mat in (("h", sys.H), ("g", sys.G)):
                for i, row in enumerate(mat):
                    if residual(row[j].value(w)) > SUPPORT_TOL:
                        return w, f"{name}[{i + 1},{j + 1}]"
    return None


def check_lowpass(sys: FilterSystem):
    zero = _origin(sys.scheme)
    root = ExactValue.sqrt(sys.N)
    for i, row in enumerate(sys.H):
        for j, f in enumerate(row):
            v = f.value(zero)
            target = root if i == j == 0 else ExactValue()
            diff = (v - target) if isinstance(v, ExactValue) else complex(v) - complex(target)
            if residual(diff) > SUPPORT_TOL:
                return (i + 1, j + 1), complex(v)
    return None


def make_filter_system(scheme: DilationScheme, mp: MultiplicityPair, H, G, name: str = "",
                       grid_q: int | None = None, check_lipschitz: bool = True) -> FilterSystem:
    """Assemble a filter system and validate support, low-pass and Lipschitz conditions."""
    H = [list(r) for r in H]
    G = [list(r) for r in G]
    c, ct = mp.c, mp.c_tilde
    if len(H) != c or any(len(r) != c for r in H):
        raise DimensionMismatch(f"H must be {c} x {c}")
    if len(G) != ct or any(len(r) != c for r in G):
        raise DimensionMismatch(f"G must be {ct} x {c}")
    for f in [f for r in H + G for f in r]:
        if not isinstance(f, FilterFn):
            raise TypeError(f"filter entries must be FilterFn instances, got {type(f).__name__}")
        if f.d != scheme.d:
            raise DimensionMismatch("filter dimension differs from the dilation dimension")
    sys = FilterSystem(scheme, mp, H, G, name)
    grid = scheme.grid(grid_q or default_grid_q(scheme.d))
    bad = check_support(sys, grid)
    if bad is not None:
        raise SupportViolation(f"{bad[1]} is nonzero at {bad[0]} outside its support set")
    bad = check_lowpass(sys)
    if bad is not None:
        raise LowPassViolation(f"H{list(bad[0])}(0) = {bad[1]} differs from the low-pass value")
    if check_lipschitz:
        est = lipschitz_estimate(sys)
        if est > LIPSCHITZ_THRESHOLD:
            raise LipschitzSuspect(f"difference quotient {est:.3g} at the origin")
    return sys


# ---------------------------------------------------------------------------
# pointwise equations


def _indicator(flag: bool, N: int):
    return ExactValue.rational(N) if flag else ExactValue()


def _row_gram(rows_at_pre_a, rows_at_pre_b, na, nb):
    """``out[i][i'] = sum_l sum_j a[l][i][j] conj(b[l][i'][j])``."""
    out = [[0] * nb for _ in range(na)]
    for a_l, b_l in zip(rows_at_pre_a, rows_at_pre_b):
        for i in range(na):
            for k in range(nb):
                out[i][k] = out[i][k] + _dot(a_l[i], b_l[k])
    return out


def verify_filter_eq(sys: FilterSystem, w) -> np.ndarray:
    """``|sum_j sum_l h_ij(w_l) conj h_i'j(w_l) - delta N chi_{S_i}(w)|`` per ``(i, i')``."""
    pre = sys.scheme.preimages(w)
    hv = [sys.h_values(p) for p in pre]
    gram = _row_gram(hv, hv, sys.c, sys.c)
    mw = sys.mp.m.value(w)
    out = np.zeros((sys.c, sys.c))
    for i in range(sys.c):
        for k in range(sys.c):
            target = _indicator(i == k and mw >= i + 1, sys.N)
            out[i, k] = residual(gram[i][k] - target)
    return out


def verify_highpass_eq(sys: FilterSystem, w) -> np.ndarray:
    """Same as :func:`verify_filter_eq` for ``G`` against ``chi`` of ``{m_tilde >= k}``."""
    pre = sys.scheme.preimages(w)
    gv = [sys.g_values(p) for p in pre]
    gram = _row_gram(gv, gv, sys.c_tilde, sys.c_tilde)
    mtw = sys.mp.m_tilde.value(w)
    out = np.zeros((sys.c_tilde, sys.c_tilde))
    for i in range(sys.c_tilde):
        for k in range(sys.c_tilde):
            target = _indicator(i == k and mtw >= i + 1, sys.N)
            out[i, k] = residual(gram[i][k] - target)
    return out


def verify_cross_orth(sys: FilterSystem, w) -> np.ndarray:
    """``|sum_j sum_l h_ij(w_l) conj g_kj(w_l)|`` per ``(i, k)``."""
    pre = sys.scheme.preimages(w)
    hv = [sys.h_values(p) for p in pre]
    gv = [sys.g_values(p) for p in pre]
    gram = _row_gram(hv, gv, sys.c, sys.c_tilde)
    out = np.zeros((sys.c, sys.c_tilde))
    for i in range(sys.c):
        for k in range(sys.c_tilde):
            out[i, k] = residual(gram[i][k])
    return out


def column_labels(sys: FilterSystem) -> list:
    """All ``(l, j)`` pairs (0-based ``l``, 1-based ``j``) in lexicographic order."""
    return [(l, j) for l in range(sys.N) for j in range(1, sys.c + 1)]


def verify_column_orth(sys: FilterSystem, w) -> np.ndarray:
    """Column orthogonality residuals, indexed by the pairs of :func:`column_labels`."""
    pre = sys.scheme.preimages(w)
    cols = []
    chis = []
    for p in pre:
        hv, gv = sys.h_values(p), sys.g_values(p)
        mp_ = sys.mp.m.value(p)
        for j in range(sys.c):
            cols.append([hv[i][j] for i in range(sys.c)] + [gv[k][j] for k in range(sys.c_tilde)])
            chis.append(mp_ >= j + 1)
    n = len(cols)
    out = np.zeros((n, n))
    for a in range(n):
        for b in range(n):
            target = _indicator(a == b and chis[a], sys.N)
            out[a, b] = residual(_dot(cols[a], cols[b]) - target)
    return out


@dataclass
class KLMatrices:
    """The matrix ``K(w)`` and its unitary core ``L(w)``.

    ``col_map`` lists the ``(l, j)`` labels of the columns of ``L`` in
    lexicographic order; ``row_map`` lists ``("h", i)`` / ``("g", k)``.
    ``L_values`` keeps the entries in their native (possibly exact) form.
    """

    omega: tuple
    K: np.ndarray
    L: np.ndarray
    row_map: list
    col_map: list
    defect: float
    L_values: list


def build_KL(sys: FilterSystem, w) -> KLMatrices:
    pre = sys.scheme.preimages(w)
    N = sys.N
    scale = sys.inv_sqrt_n
    labels = column_labels(sys)
    hv = [sys.h_values(p) for p in pre]
    gv = [sys.g_values(p) for p in pre]

    def scaled(v):
        return v * scale if isinstance(v, ExactValue) else complex(v) / math.sqrt(N)

    rows_all = []
    for i in range(sys.c):
        rows_all.append([scaled(hv[l][i][j - 1]) for l, j in labels])
    for k in range(sys.c_tilde):
        rows_all.append([scaled(gv[l][k][j - 1]) for l, j in labels])
    K = np.array([[complex(v) for v in r] for r in rows_all], dtype=complex).reshape(
        sys.c + sys.c_tilde, len(labels))

    mw, mtw = sys.mp.m.value(w), sys.mp.m_tilde.value(w)
    row_idx = list(range(mw)) + [sys.c + k for k in range(mtw)]
    row_map = [("h", i + 1) for i in range(mw)] + [("g", k + 1) for k in range(mtw)]
    col_map = [(l, j) for l, j in labels if sys.mp.m.value(pre[l]) >= j]
    col_idx = [labels.index(lab) for lab in col_map]
    if len(row_idx) != len(col_idx):
        raise DimensionMismatch(
            f"at {w}: m + m_tilde = {len(row_idx)} but sum_l m(w_l) = {len(col_idx)}")
    rest_rows = [r for r in range(K.shape[0]) if r not in row_idx]
    rest_cols = [c for c in range(K.shape[1]) if c not in col_idx]
    if (rest_rows and np.max(np.abs(K[rest_rows, :])) > FLOAT_TOL) or (
            rest_cols and np.max(np.abs(K[:, rest_cols])) > FLOAT_TOL):
        raise DimensionMismatch(f"at {w}: K has nonzero entries outside the L block")
    L_values = [[rows_all[r][c] for c in col_idx] for r in row_idx]
    L = K[np.ix_(row_idx, col_idx)] if row_idx else np.zeros((0, 0), dtype=complex)
    return KLMatrices(w, K, L, row_map, col_map, unitarity_defect(L, L_values), L_values)


def unitarity_defect(L: np.ndarray, values=None) -> float:
    """``max(||L* L - I||, ||L L* - I||)`` (max-entry norm); exact zero for exact unitaries."""
    n = L.shape[0]
    if n == 0:
        return 0.0
    if values is not None and all(isinstance(v, ExactValue) for r in values for v in r):
        worst = 0.0
        for a in range(n):
            for b in range(n):
                one = ExactValue.rational(1 if a == b else 0)
                cols = _dot([values[r][a] for r in range(n)], [values[r][b] for r in range(n)])
                rows = _dot(values[a], values[b])
                worst = max(worst, residual(cols - one), residual(rows - one))
        return worst
    eye = np.eye(n)
    return float(max(np.max(np.abs(L.conj().T @ L - eye)), np.max(np.abs(L @ L.conj().T - eye))))


# ---------------------------------------------------------------------------
# sweeps


def validate_system(sys: FilterSystem, grid_q: int | None = None, tol: float = FLOAT_TOL) -> Report:
    """Run every pointwise equation on the grid and collect maxima with witnesses."""
    q = grid_q or default_grid_q(sys.scheme.d)
    grid = sys.scheme.grid(q)
    rep = Report(f"filter system {sys.name or ''}".strip())

    def at(w):
        kl = build_KL(sys, w)
        return (
            float(np.max(verify_filter_eq(sys, w), initial=0.0)),
            float(np.max(verify_highpass_eq(sys, w), initial=0.0)),
            float(np.max(verify_cross_orth(sys, w), initial=0.0)),
            float(np.max(verify_column_orth(sys, w), initial=0.0)),
            kl.defect,
        )

    results = pmap(at, grid)
    names = ["low-pass equation", "high-pass equation", "cross orthogonality",
             "column orthogonality", "L unitarity"]
    for idx, name in enumerate(names):
        vals = [r[idx] for r in results]
        k = int(np.argmax(vals))
        rep.add(name, vals[k] <= tol, vals[k], tol, grid[k])
    rep.data["grid_points"] = len(grid)
    rep.data["exact_arithmetic"] = sys.exact
    return rep


# ---------------------------------------------------------------------------
# high-pass completion


def complete_highpass(scheme: DilationScheme, mp: MultiplicityPair, H, grid_q: int | None = None,
                      tol: float = 1e-10):
    """Pointwise Gram-Schmidt completion of ``H`` to a unitary ``L``.

    For each grid point ``w`` the normalized rows of ``H`` over the columns
    ``(l, j)`` with ``j <= m(w_l)`` are extended by orthonormalizing the
    standard basis vectors in column order.  The new rows, times
    ``sqrt(N)``, become the values ``g_kj(w_l)``.  The result is a
    ``c_tilde x c`` matrix of :class:`~gmrawave.funcalg.Sampled` functions on
    the grid of denominator ``N * grid_q``, which contains every preimage of
    the ``grid_q`` grid.
    """
    q = grid_q or default_grid_q(scheme.d)
    H = [list(r) for r in H]
    c, ct, N, d = mp.c, mp.c_tilde, scheme.N, scheme.d
    den = N * q
    vals = np.zeros((ct, c) + (den,) * d, dtype=complex)
    root = math.sqrt(N)
    for w in scheme.grid(q):
        pre = scheme.preimages(w)
        cols = [(l, j) for l in range(N) for j in range(1, c + 1) if mp.m.value(pre[l]) >= j]
        mw, mtw = mp.m.value(w), mp.m_tilde.value(w)
        if len(cols) != mw + mtw:
            raise CompletionFailed(f"at {w}: {len(cols)} columns for m + m_tilde = {mw + mtw}")
        hv = [[[complex(f.value(p)) for f in row] for row in H] for p in pre]
        basis = [np.array([hv[l][i][j - 1] for l, j in cols]) / root for i in range(mw)]
        new_rows = []
        n = len(cols)
        for t in range(n):
            if len(basis) == n:
                break
            v = np.zeros(n, dtype=complex)
            v[t] = 1.0
            for _ in range(2):
                for b in basis:
                    v = v - np.vdot(b, v) * b
            norm = np.linalg.norm(v)
            if norm < tol:
                continue
            v = v / norm
            basis.append(v)
            new_rows.append(v)
        if len(new_rows) != mtw:
            raise CompletionFailed(f"at {w}: found {len(new_rows)} high-pass rows, need {mtw}")
        for k, row in enumerate(new_rows):
            for (l, j), val in zip(cols, row):
                idx = tuple(int(x * den) % den for x in pre[l])
                vals[(k, j - 1) + idx] = root * val
    return [[Sampled(den, vals[k, j], d) for j in range(c)] for k in range(ct)]


def zero_highpass(mp: MultiplicityPair, d: int = 1):
    return [[ZeroFn(d) for _ in range(mp.c)] for _ in range(mp.c_tilde)]
