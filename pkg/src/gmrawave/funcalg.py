"""Functions on the torus (and on the line) used as filter entries.

Every filter entry is a :class:`FilterFn`.  The common protocol is

``value(x)``
    value at an exact rational point; an :class:`~gmrawave.exact.ExactValue`
    when the function is exactly representable there, else a ``complex``.
``evaluate_many(xs)``
    vectorized float evaluation (``xs`` of shape ``(n,)`` for ``d == 1`` and
    ``(n, d)`` otherwise).
``constant_near(x0)``
    ``(value, radius)`` when the function is constant on the open ball of
    that radius around ``x0``, else ``None``.
``breakpoints()``
    the finitely many jump points in ``[-1/2, 1/2)`` of a piecewise-constant
    function, or ``None`` for anything else.
"""

from __future__ import annotations

import bisect
import cmath
import math
from fractions import Fraction

import numpy as np
from scipy.special import expit

from .errors import EpsilonTooLarge, InvalidInterval, OverlappingPieces
from .exact import ExactValue, as_value
from .intervals import HALF, IntervalSet
from .lattice import reduce_scalar

SQRT2 = math.sqrt(2.0)
_EXACT_ZERO = ExactValue()


def _scalar(x) -> Fraction:
    if isinstance(x, (tuple, list)):
        if len(x) != 1:
            raise ValueError("one-dimensional function evaluated at a multi-dimensional point")
        x = x[0]
    return Fraction(x)


def _flat_xs(xs):
    xs = np.asarray(xs, dtype=float)
    if xs.ndim == 2 and xs.shape[1] == 1:
        xs = xs[:, 0]
    return xs


def _wrap_float(xs):
    return xs - np.floor(xs + 0.5)


def unit_phase(x: Fraction) -> complex:
    """``exp(2 pi i x)``, exact for quarter-integers."""
    x = Fraction(x)
    r = (4 * x) % 4
    if r.denominator == 1:
        return (1 + 0j, 1j, -1 + 0j, -1j)[int(r)]
    return cmath.exp(2j * math.pi * float(x))


def _torus_distance(t: Fraction, points) -> Fraction:
    best = None
    for b in points:
        for n in (-1, 0, 1):
            dist = abs(t - (b + n))
            if best is None or dist < best:
                best = dist
    return best


class FilterFn:
    """Base class; see the module docstring for the protocol."""

    d = 1
    exact = False

    def value(self, x):
        raise NotImplementedError

    def __call__(self, x) -> complex:
        return complex(self.value(x))

    def evaluate_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.d == 1:
            xs = _flat_xs(xs)
            return np.array([complex(self.value(Fraction(float(x)))) for x in xs], dtype=complex)
        return np.array([complex(self.value(tuple(Fraction(float(c)) for c in row)))
                         for row in xs], dtype=complex)

    def constant_near(self, x0):
        return None

    def breakpoints(self):
        return None

    def __mul__(self, factor):
        return Scaled(self, factor)

    __rmul__ = __mul__


class ZeroFn(FilterFn):
    """The zero function in any dimension."""

    exact = True

    def __init__(self, d: int = 1):
        self.d = d

    def value(self, x):
        return _EXACT_ZERO

    def evaluate_many(self, xs):
        xs = np.asarray(xs, dtype=float)
        n = xs.shape[0] if xs.ndim else 1
        return np.zeros(n, dtype=complex)

    def constant_near(self, x0):
        return _EXACT_ZERO, Fraction(1, 2)

    def breakpoints(self):
        return []

    def __eq__(self, other):
        return isinstance(other, ZeroFn) and other.d == self.d

    def __hash__(self):
        return hash(("zero", self.d))

    def __repr__(self):
        return "ZeroFn()"


class PiecewiseFn(FilterFn):
    """Piecewise-constant function with half-open rational pieces ``[lo, hi)``.

    With ``periodic=True`` the pieces live in ``[-1/2, 1/2)`` and the function
    is extended 1-periodically; otherwise it is a function on the line that
    takes ``default`` off its pieces.
    """

    def __init__(self, pieces=(), default=0, periodic=True):
        norm = []
        for lo, hi, v in pieces:
            lo, hi = Fraction(lo), Fraction(hi)
            if lo >= hi:
                raise InvalidInterval(f"piece [{lo}, {hi}) is empty or reversed")
            if periodic and (lo < -HALF or hi > HALF):
                raise InvalidInterval(f"piece [{lo}, {hi}) leaves [-1/2, 1/2]")
            norm.append((lo, hi, as_value(v)))
        norm.sort(key=lambda p: p[0])
        for (a0, b0, _), (a1, b1, _) in zip(norm, norm[1:]):
            if a1 < b0:
                raise OverlappingPieces(f"[{a0}, {b0}) overlaps [{a1}, {b1})")
        self.pieces = tuple(norm)
        self.default = as_value(default)
        self.periodic = periodic
        self._los = [p[0] for p in self.pieces]
        self.exact = isinstance(self.default, ExactValue) and all(
            isinstance(p[2], ExactValue) for p in self.pieces)
        self._arrays = None

    # evaluation -----------------------------------------------------------
    def value(self, x):
        x = _scalar(x)
        if self.periodic:
            x = reduce_scalar(x)
        k = bisect.bisect_right(self._los, x) - 1
        if k >= 0 and x < self.pieces[k][1]:
            return self.pieces[k][2]
        return self.default

    def arrays(self):
        """Float arrays ``(lo, hi, values)`` of the pieces."""
        if self._arrays is None:
            self._arrays = (
                np.array([float(p[0]) for p in self.pieces], dtype=float),
                np.array([float(p[1]) for p in self.pieces], dtype=float),
                np.array([complex(p[2]) for p in self.pieces], dtype=complex),
            )
        return self._arrays

    def evaluate_many(self, xs):
        xs = _flat_xs(xs)
        if self.periodic:
            xs = _wrap_float(xs)
        los, his, vals = self.arrays()
        out = np.full(xs.shape, complex(self.default), dtype=complex)
        if los.size:
            k = np.searchsorted(los, xs, side="right") - 1
            ok = k >= 0
            kk = np.where(ok, k, 0)
            inside = ok & (xs < his[kk])
            out[inside] = vals[kk[inside]]
        return out

    def breakpoints(self):
        pts = set()
        for lo, hi, _ in self.pieces:
            pts.add(lo)
            pts.add(hi)
        if self.periodic:
            pts = {reduce_scalar(p) for p in pts}
            pts.add(-HALF)
        return sorted(pts)

    def constant_near(self, x0):
        x0 = _scalar(x0)
        if self.periodic:
            x0 = reduce_scalar(x0)
            pts = self.breakpoints()
            dist = _torus_distance(x0, pts) if pts else Fraction(1, 2)
        else:
            pts = self.breakpoints()
            dist = min((abs(x0 - p) for p in pts), default=None)
        if dist == 0:
            return None
        if dist is None:
            return self.default, None
        return self.value(x0), dist

    # algebra ---------------------------------------------------------------
    def merged(self) -> "PiecewiseFn":
        """Canonical form: adjacent equal pieces joined, default-valued pieces dropped."""
        out = []
        for lo, hi, v in self.pieces:
            if v == self.default:
                continue
            if out and out[-1][1] == lo and out[-1][2] == v:
                out[-1] = (out[-1][0], hi, v)
            else:
                out.append((lo, hi, v))
        return PiecewiseFn(out, self.default, self.periodic)

    def support(self) -> IntervalSet:
        return IntervalSet([(lo, hi) for lo, hi, v in self.pieces if v != 0])

    def conj(self) -> "PiecewiseFn":
        return PiecewiseFn([(lo, hi, v.conjugate()) for lo, hi, v in self.pieces],
                           self.default.conjugate(), self.periodic)

    def dilated(self, s) -> "PiecewiseFn":
        """The function ``x -> f(s x)`` for rational ``s > 0`` (line functions only)."""
        s = Fraction(s)
        if self.periodic or s <= 0:
            raise ValueError("dilation is defined here for line functions and s > 0")
        return PiecewiseFn([(lo / s, hi / s, v) for lo, hi, v in self.pieces],
                           self.default, False)

    def restricted(self, lo, hi) -> "PiecewiseFn":
        """Line function equal to ``f`` on ``[lo, hi)`` and 0 elsewhere."""
        lo, hi = Fraction(lo), Fraction(hi)
        if self.periodic:
            raise ValueError("restrict a line function")
        cuts = sorted({lo, hi} | {p for p in self.breakpoints() if lo < p < hi})
        out = []
        for a, b in zip(cuts, cuts[1:]):
            v = self.value(a)
            if v != 0:
                out.append((a, b, v))
        return PiecewiseFn(out, 0, False)

    def product(self, other: "PiecewiseFn") -> "PiecewiseFn":
        """Pointwise product of two line functions with zero default."""
        if self.periodic or other.periodic:
            raise ValueError("products are formed for line functions")
        cuts = sorted(set(self.breakpoints()) | set(other.breakpoints()))
        out = []
        for a, b in zip(cuts, cuts[1:]):
            v = self.value(a) * other.value(a)
            if v != 0:
                out.append((a, b, v))
        return PiecewiseFn(out, 0, False).merged()

    def integral(self):
        total = 0
        for lo, hi, v in self.pieces:
            total = total + v * (hi - lo)
        return total

    def integral_against_exponential(self, freq) -> complex:
        return pc_integral_against_exponential(self, freq)

    def __eq__(self, other):
        if not isinstance(other, PiecewiseFn):
            return NotImplemented
        a, b = self.merged(), other.merged()
        return (a.pieces == b.pieces and a.default == b.default
                and a.periodic == b.periodic)

    def __hash__(self):
        m = self.merged()
        return hash((m.pieces, m.default, m.periodic))

    def __repr__(self):
        body = ", ".join(f"[{lo}, {hi}): {v}" for lo, hi, v in self.pieces)
        kind = "periodic" if self.periodic else "line"
        return f"PiecewiseFn({kind}; {body})"


def pm(a, b):
    """The symmetric pair ``[-b, -a)`` and ``[a, b)`` as a list of intervals."""
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        raise InvalidInterval(f"symmetric interval needs a < b, got {a}, {b}")
    return [(-b, -a), (a, b)]


def pc_from_pieces(spec, periodic=True, default=0) -> PiecewiseFn:
    """Build a :class:`PiecewiseFn` from ``((lo, hi), value)`` items.

    An item may also be ``((lo, hi), value, True)`` to request the symmetric
    pair ``[-hi, -lo) u [lo, hi)``.
    """
    pieces = []
    for item in spec:
        (lo, hi), v = item[0], item[1]
        symmetric = len(item) > 2 and item[2]
        if symmetric:
            for a, b in pm(lo, hi):
                pieces.append((a, b, v))
        else:
            pieces.append((lo, hi, v))
    return PiecewiseFn(pieces, default, periodic)


def pc_eval(f: PiecewiseFn, x):
    return f.value(x)


def indicator(intervals, value=1, periodic=True) -> PiecewiseFn:
    """Indicator (times ``value``) of a union of intervals."""
    s = intervals if isinstance(intervals, IntervalSet) else IntervalSet(intervals)
    return PiecewiseFn([(lo, hi, value) for lo, hi in s], 0, periodic)


def pc_integral_against_exponential(f: PiecewiseFn, freq) -> complex:
    """``int f(x) exp(-2 pi i freq x) dx`` for a line function with finitely many pieces."""
    a = float(freq)
    total = 0j
    for lo, hi, v in f.pieces:
        v = complex(v)
        if a == 0:
            total += v * float(hi - lo)
        else:
            lo_f, hi_f = float(lo), float(hi)
            total += v * (cmath.exp(-2j * math.pi * a * hi_f) - cmath.exp(-2j * math.pi * a * lo_f)) / (-2j * math.pi * a)
    return total


# ---------------------------------------------------------------------------
# smooth filters


def _theta(u):
    """Standard C-infinity step on ``[0, 1]``: ``phi(u) / (phi(u) + phi(1-u))``."""
    u = np.asarray(u, dtype=float)
    out = np.where(u >= 1.0, 1.0, 0.0)
    mid = (u > 0.0) & (u < 1.0)
    if np.any(mid):
        um = u[mid]
        # phi(u)/(phi(u)+phi(1-u)) = 1/(1+exp(1/u - 1/(1-u)))
        out = out.astype(float)
        out[mid] = expit(1.0 / (1.0 - um) - 1.0 / um)
    return out


def smooth_step(a, b):
    """C-infinity ramp: 0 on ``(-inf, a]``, 1 on ``[b, inf)``, increasing between."""
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        raise InvalidInterval(f"smooth_step needs a < b, got {a}, {b}")
    af, width = float(a), float(b - a)

    def step(x):
        x_arr = np.asarray(x, dtype=float)
        res = _theta((x_arr - af) / width)
        return float(res) if res.ndim == 0 else res

    return step


class SmoothFilter(FilterFn):
    """Periodic C-infinity filter with exactly flat regions.

    ``flat_zero`` and ``flat_max`` record (as half-open torus sets) where the
    value is exactly 0 and where its modulus is exactly ``sqrt(2)``.
    """

    flat_zero = IntervalSet()
    flat_max = IntervalSet()
    epsilon = None

    def evaluator(self, xs):
        return self.evaluate_many(xs)


class QmfLowpass(SmoothFilter):
    """Real, even, nonnegative low-pass filter built from Meyer-type ramps.

    On ``t = |x|`` in ``[0, 1/2]`` with ``a = 1/14 + eps``, ``b = 1/7 - eps``,
    ``c = 3/14 + eps``, ``d = 2/7 - eps``, ``e = 5/14 + eps``, ``f = 3/7 - eps``:
    value ``sqrt 2`` on ``[0, a]`` and ``[d, e]``, zero on ``[b, c]`` and
    ``[f, 1/2]``, with ramps on the three bands in between.  The band
    ``(e, f)`` is the mirror image of ``(a, b)`` under ``t -> 1/2 - t`` and the
    band ``(c, d)`` is its own mirror image, which forces
    ``|p(x)|^2 + |p(x + 1/2)|^2 = 2``.
    """

    def __init__(self, epsilon=Fraction(1, 100)):
        eps = Fraction(epsilon)
        if eps <= 0:
            raise InvalidInterval("epsilon must be positive")
        if eps > Fraction(1, 100):
            raise EpsilonTooLarge(f"epsilon {eps} exceeds 1/100")
        self.epsilon = eps
        s = Fraction(1, 14)
        self.knots = (s + eps, 2 * s - eps, 3 * s + eps, 4 * s - eps, 5 * s + eps, 6 * s - eps)
        self._fknots = tuple(float(k) for k in self.knots)
        a, b, c, d, e, f = self.knots
        self.flat_zero = IntervalSet([(-c, -b), (b, c), (-HALF, -f), (f, HALF)])
        self.flat_max = IntervalSet([(-a, a), (-e, -d), (d, e)])
        self.exact = False

    def _profile(self, t):
        """Float profile on ``t`` in ``[0, 1/2]`` (array)."""
        a, b, c, d, e, f = self._fknots
        out = np.zeros_like(t)
        out[t <= a] = SQRT2
        band1 = (t > a) & (t < b)
        out[band1] = SQRT2 * np.cos(0.5 * np.pi * _theta((t[band1] - a) / (b - a)))
        band2 = (t > c) & (t < d)
        out[band2] = SQRT2 * np.sin(0.5 * np.pi * _theta((t[band2] - c) / (d - c)))
        flat = (t >= d) & (t <= e)
        out[flat] = SQRT2
        band3 = (t > e) & (t < f)
        out[band3] = SQRT2 * np.cos(0.5 * np.pi * _theta((t[band3] - e) / (f - e)))
        return out

    def _region(self, t: Fraction):
        a, b, c, d, e, f = self.knots
        if t <= a or d <= t <= e:
            return "max"
        if b <= t <= c or t >= f:
            return "zero"
        return "band"

    def value(self, x):
        t = abs(reduce_scalar(_scalar(x)))
        region = self._region(t)
        if region == "max":
            return complex(SQRT2)
        if region == "zero":
            return 0j
        return complex(self._profile(np.array([float(t)]))[0])

    def evaluate_many(self, xs):
        xs = _flat_xs(xs)
        t = np.abs(_wrap_float(xs))
        return self._profile(t).astype(complex)

    def constant_near(self, x0):
        t = abs(reduce_scalar(_scalar(x0)))
        a, b, c, d, e, f = self.knots
        if t < a:
            return complex(SQRT2), a - t
        if d < t < e:
            return complex(SQRT2), min(t - d, e - t)
        if b < t < c:
            return 0j, min(t - b, c - t)
        if t > f:
            return 0j, t - f
        return None

    def __repr__(self):
        return f"QmfLowpass(epsilon={self.epsilon})"


class QmfHighpass(SmoothFilter):
    """``p1(x) = exp(2 pi i x) * conj(p0(x + 1/2))`` for a real low-pass ``p0``."""

    def __init__(self, lowpass: QmfLowpass):
        self.lowpass = lowpass
        self.epsilon = lowpass.epsilon
        self.flat_zero = lowpass.flat_zero.shifted(-HALF).wrapped()
        self.flat_max = lowpass.flat_max.shifted(-HALF).wrapped()

    def value(self, x):
        x = reduce_scalar(_scalar(x))
        partner = self.lowpass.value(x + HALF)
        if partner == 0:
            return 0j
        return unit_phase(x) * partner.conjugate()

    def evaluate_many(self, xs):
        xs = _wrap_float(_flat_xs(xs))
        partner = self.lowpass.evaluate_many(xs + 0.5)
        out = np.exp(2j * np.pi * xs) * np.conj(partner)
        out[partner == 0] = 0
        return out

    def constant_near(self, x0):
        got = self.lowpass.constant_near(_scalar(x0) + HALF)
        if got is not None and got[0] == 0:
            return 0j, got[1]
        return None

    def __repr__(self):
        return f"QmfHighpass(epsilon={self.epsilon})"


def make_qmf_lowpass(epsilon=Fraction(1, 100)) -> QmfLowpass:
    return QmfLowpass(epsilon)


def highpass_from_lowpass_classical(p0: QmfLowpass) -> QmfHighpass:
    return QmfHighpass(p0)


# ---------------------------------------------------------------------------
# combinators and sampled functions


class Shifted(FilterFn):
    """``x -> base(x + shift)``."""

    def __init__(self, base: FilterFn, shift):
        self.base = base
        self.shift = Fraction(shift)
        self.exact = base.exact

    def value(self, x):
        return self.base.value(_scalar(x) + self.shift)

    def evaluate_many(self, xs):
        return self.base.evaluate_many(_flat_xs(xs) + float(self.shift))

    def constant_near(self, x0):
        return self.base.constant_near(_scalar(x0) + self.shift)

    def breakpoints(self):
        pts = self.base.breakpoints()
        if pts is None:
            return None
        return sorted({reduce_scalar(p - self.shift) for p in pts} | {-HALF})

    def __repr__(self):
        return f"Shifted({self.base!r}, {self.shift})"


class Masked(FilterFn):
    """``base`` on a torus subset, exact zero elsewhere."""

    def __init__(self, base: FilterFn, mask: IntervalSet):
        self.base = base
        self.mask = mask
        self.exact = base.exact

    def value(self, x):
        t = reduce_scalar(_scalar(x))
        if self.mask.contains(t):
            return self.base.value(t)
        return _EXACT_ZERO

    def evaluate_many(self, xs):
        xs = _wrap_float(_flat_xs(xs))
        out = np.zeros(xs.shape, dtype=complex)
        inside = self.mask.contains_many(xs)
        if np.any(inside):
            out[inside] = self.base.evaluate_many(xs[inside])
        return out

    def _mask_edges(self):
        pts = set(self.mask.endpoints())
        # the seam at +-1/2 is not an edge when the mask runs across it
        if -HALF in pts and HALF in pts:
            pts -= {-HALF, HALF}
        elif HALF in pts:
            pts.discard(HALF)
            pts.add(-HALF)
        return sorted(pts)

    def constant_near(self, x0):
        t = reduce_scalar(_scalar(x0))
        edges = self._mask_edges()
        dist = _torus_distance(t, edges) if edges else Fraction(1, 2)
        if dist == 0:
            return None
        if not self.mask.contains(t):
            return _EXACT_ZERO, dist
        got = self.base.constant_near(t)
        if got is None:
            return None
        return got[0], min(got[1], dist)

    def breakpoints(self):
        pts = self.base.breakpoints()
        if pts is None:
            return None
        return sorted(set(pts) | {reduce_scalar(p) for p in self.mask.endpoints()} | {-HALF})

    def __repr__(self):
        return f"Masked({self.base!r}, {self.mask!r})"


class Scaled(FilterFn):
    """``factor * base`` for a constant factor."""

    def __init__(self, base: FilterFn, factor):
        self.base = base
        self.factor = as_value(factor)
        self.d = base.d
        self.exact = base.exact and isinstance(self.factor, ExactValue)

    def value(self, x):
        return self.factor * self.base.value(x)

    def evaluate_many(self, xs):
        return complex(self.factor) * self.base.evaluate_many(xs)

    def constant_near(self, x0):
        got = self.base.constant_near(x0)
        if got is None:
            return None
        return self.factor * got[0], got[1]

    def breakpoints(self):
        return self.base.breakpoints()

    def __repr__(self):
        return f"Scaled({self.base!r}, {self.factor!r})"


class Sampled(FilterFn):
    """Values on the grid ``(1/den) Z^d`` (periodic), nearest-neighbor lookup.

    ``values`` has shape ``(den,) * d``; the entry at index ``k`` belongs to
    the point ``k / den`` reduced into the torus.
    """

    def __init__(self, den: int, values, d: int = 1):
        self.den = int(den)
        self.d = d
        arr = np.asarray(values, dtype=complex)
        if arr.shape != (self.den,) * d:
            raise ValueError(f"sampled values must have shape {(self.den,) * d}, got {arr.shape}")
        self.values = arr
        self.values.setflags(write=False)

    def _index(self, p):
        if self.d == 1:
            p = (_scalar(p),)
        return tuple(math.floor(c * self.den + HALF) % self.den for c in p)

    def value(self, x):
        return complex(self.values[self._index(x)])

    def evaluate_many(self, xs):
        xs = np.asarray(xs, dtype=float)
        if self.d == 1:
            xs = _flat_xs(xs)
            idx = np.floor(xs * self.den + 0.5).astype(np.int64) % self.den
            return self.values[idx]
        idx = np.floor(xs * self.den + 0.5).astype(np.int64) % self.den
        return self.values[tuple(idx.T)]

    def __repr__(self):
        return f"Sampled(den={self.den}, d={self.d})"


class CallableFn(FilterFn):
    """Wrap a Python callable on exact points."""

    def __init__(self, fn, d: int = 1, exact: bool = False, name: str = "callable"):
        self.fn = fn
        self.d = d
        self.exact = exact
        self.name = name

    def value(self, x):
        return self.fn(x)

    def __repr__(self):
        return f"CallableFn({self.name})"
