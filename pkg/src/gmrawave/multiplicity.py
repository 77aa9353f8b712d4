"""Multiplicity functions, their complements, and admissibility checks."""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConsistencyViolated, IndexOutOfRange, InvalidInterval, OverlappingPieces
from .intervals import HALF, IntervalSet
from .lattice import DilationScheme, as_point, format_rational, reduce_point, reduce_scalar
from .report import Report


class MultiplicityFn:
    """Bounded integer-valued function on the torus.

    In dimension one it is stored as a partition of ``[-1/2, 1/2)`` into
    rational half-open pieces; otherwise it wraps a callable on exact points
    together with its maximum ``c``.
    """

    def __init__(self, d=1, pieces=None, fn=None, c=None, name=""):
        self.d = d
        self.name = name
        if pieces is not None:
            if d != 1:
                raise ValueError("piecewise multiplicities are one-dimensional")
            self.pieces = _normalize_pieces(pieces)
            self._los = [p[0] for p in self.pieces]
            self._fn = None
            self.c = max(v for _, _, v in self.pieces)
        else:
            if fn is None or c is None:
                raise ValueError("need pieces, or a callable and its maximum")
            self.pieces = None
            self._fn = fn
            self.c = int(c)

    @classmethod
    def constant(cls, value: int, d: int = 1) -> "MultiplicityFn":
        if d == 1:
            return cls(1, pieces=[(-HALF, HALF, value)])
        return cls(d, fn=lambda w: value, c=value)

    @classmethod
    def from_sets(cls, sets) -> "MultiplicityFn":
        """``m = sum_i chi_{S_i}`` for nested one-dimensional sets ``S_1 > S_2 > ...``."""
        cuts = {-HALF, HALF}
        for s in sets:
            cuts.update(s.endpoints())
        cuts = sorted(c for c in cuts if -HALF <= c <= HALF)
        pieces = []
        for a, b in zip(cuts, cuts[1:]):
            pieces.append((a, b, sum(1 for s in sets if s.contains(a))))
        return cls(1, pieces=pieces)

    @property
    def is_piecewise(self) -> bool:
        return self.pieces is not None

    def value(self, w) -> int:
        if self.pieces is not None:
            t = reduce_scalar(as_point(w, 1)[0])
            k = bisect.bisect_right(self._los, t) - 1
            return self.pieces[k][2]
        return int(self._fn(reduce_point(as_point(w, self.d))))

    __call__ = value

    def breakpoints(self) -> list:
        if self.pieces is None:
            return None
        return sorted({p[0] for p in self.pieces})

    def s_set(self, i: int):
        """``S_i = {m >= i}``: an :class:`IntervalSet` in dimension one, else a predicate."""
        if i < 1 or i > self.c:
            raise IndexOutOfRange(f"S_{i} requested but c = {self.c}")
        if self.pieces is not None:
            return IntervalSet([(a, b) for a, b, v in self.pieces if v >= i])
        return lambda w: self.value(w) >= i

    def in_s(self, i: int, w) -> bool:
        return self.value(w) >= i

    def __eq__(self, other):
        if not isinstance(other, MultiplicityFn):
            return NotImplemented
        if self.pieces is not None and other.pieces is not None:
            return self.pieces == other.pieces
        return self is other

    def __hash__(self):
        return hash(self.pieces) if self.pieces is not None else id(self)

    def to_spec(self) -> list:
        return [{"lo": format_rational(a), "hi": format_rational(b), "value": v}
                for a, b, v in self.pieces]

    def __repr__(self):
        if self.pieces is None:
            return f"MultiplicityFn(d={self.d}, c={self.c})"
        body = ", ".join(f"[{a}, {b}): {v}" for a, b, v in self.pieces)
        return f"MultiplicityFn({body})"


def _normalize_pieces(pieces):
    items = []
    for lo, hi, v in pieces:
        lo, hi = Fraction(lo), Fraction(hi)
        if lo >= hi or lo < -HALF or hi > HALF:
            raise InvalidInterval(f"multiplicity piece [{lo}, {hi}) is invalid")
        if int(v) != v or v < 0:
            raise InvalidInterval(f"multiplicity values must be nonnegative integers, got {v}")
        items.append((lo, hi, int(v)))
    items.sort()
    for (a0, b0, _), (a1, b1, _) in zip(items, items[1:]):
        if a1 < b0:
            raise OverlappingPieces(f"[{a0}, {b0}) overlaps [{a1}, {b1})")
    # fill gaps with zero and merge equal neighbours
    full = []
    cur = -HALF
    for lo, hi, v in items:
        if lo > cur:
            full.append((cur, lo, 0))
        full.append((lo, hi, v))
        cur = hi
    if cur < HALF:
        full.append((cur, HALF, 0))
    merged = []
    for lo, hi, v in full:
        if merged and merged[-1][2] == v and merged[-1][1] == lo:
            merged[-1] = (merged[-1][0], hi, v)
        else:
            merged.append((lo, hi, v))
    return tuple(merged)


@dataclass(frozen=True, eq=True)
class MultiplicityPair:
    """A multiplicity ``m`` with its complement ``m_tilde``."""

    m: MultiplicityFn
    m_tilde: MultiplicityFn

    @property
    def c(self) -> int:
        return self.m.c

    @property
    def c_tilde(self) -> int:
        return self.m_tilde.c

    @property
    def d(self) -> int:
        return self.m.d

    def size(self, w) -> int:
        """``m(w) + m_tilde(w)``, the size of the unitary blocks at ``w``."""
        return self.m.value(w) + self.m_tilde.value(w)


def _sum_over_preimages(scheme, m, w) -> int:
    return sum(m.value(p) for p in scheme.preimages(w))


def conjugate_multiplicity(scheme: DilationScheme, m: MultiplicityFn, check_q: int = 16) -> MultiplicityFn:
    """``m_tilde(w) = sum_l m(w_l) - m(w)``.

    In dimension one with a positive dilation factor the result is computed
    exactly as a piecewise function by refining the breakpoints of ``m``
    under the preimage maps.  Otherwise a lazily evaluated function is
    returned whose maximum is taken over the grid of denominator ``check_q``.
    """
    if m.is_piecewise and scheme.d == 1 and scheme.scalar > 0:
        a = scheme.scalar
        cuts = set(m.breakpoints()) | {-HALF}
        for t in m.breakpoints():
            cuts.add(reduce_scalar(a * t))
        cuts = sorted(cuts) + [HALF]
        pieces = []
        for lo, hi in zip(cuts, cuts[1:]):
            total = _sum_over_preimages(scheme, m, lo)
            val = total - m.value(lo)
            if val < 0:
                raise ConsistencyViolated(
                    f"m({lo}) = {m.value(lo)} exceeds the preimage sum {total}", witness=(lo,))
            pieces.append((lo, hi, val))
        return MultiplicityFn(1, pieces=pieces)

    def fn(w):
        total = _sum_over_preimages(scheme, m, w)
        val = total - m.value(w)
        if val < 0:
            raise ConsistencyViolated(f"m exceeds the preimage sum at {w}", witness=w)
        return val

    grid = scheme.grid(check_q)
    c = max(fn(w) for w in grid)
    return MultiplicityFn(scheme.d, fn=fn, c=c)


def make_pair(scheme: DilationScheme, m: MultiplicityFn, m_tilde: MultiplicityFn | None = None,
              grid_q: int | None = None) -> MultiplicityPair:
    """Pair ``m`` with its complement; a given complement is checked on a grid."""
    if m_tilde is None:
        return MultiplicityPair(m, conjugate_multiplicity(scheme, m))
    q = grid_q or (7 * 2 ** 8 if scheme.d == 1 else 16)
    for w in scheme.grid(q):
        lhs = m.value(w) + m_tilde.value(w)
        rhs = _sum_over_preimages(scheme, m, w)
        if lhs != rhs:
            raise ConsistencyViolated(
                f"m + m_tilde = {lhs} but the preimage sum is {rhs}", witness=w)
    return MultiplicityPair(m, m_tilde)


def s_set(m: MultiplicityFn, i: int):
    return m.s_set(i)


def check_consistency_inequality(scheme: DilationScheme, m: MultiplicityFn, gridQ: int) -> Report:
    """``m(w) <= sum_l m(w_l)`` at every point of the grid of denominator ``gridQ``."""
    rep = Report("consistency inequality")
    worst = 0
    count = 0
    for w in scheme.grid(gridQ):
        gap = m.value(w) - _sum_over_preimages(scheme, m, w)
        if gap > 0:
            count += 1
            if count <= 20:
                rep.add("m <= preimage sum", False, float(gap), 0.0, w)
            worst = max(worst, gap)
    rep.add("consistency inequality on grid", count == 0, float(worst), 0.0,
            detail=f"{count} violations among {gridQ ** scheme.d} points")
    rep.data["violations"] = count
    return rep


def check_consistency_equation(pair: MultiplicityPair, scheme: DilationScheme, gridQ: int) -> Report:
    rep = Report("consistency equation")
    bad = 0
    for w in scheme.grid(gridQ):
        gap = pair.m.value(w) + pair.m_tilde.value(w) - _sum_over_preimages(scheme, pair.m, w)
        if gap:
            bad += 1
            if bad <= 20:
                rep.add("m + m_tilde = preimage sum", False, float(abs(gap)), 0.0, w)
    rep.add("consistency equation on grid", bad == 0, float(bad), 0.0,
            detail=f"{gridQ ** scheme.d} points")
    return rep


# ---------------------------------------------------------------------------
# the set Delta


def delta_approximation(scheme: DilationScheme, m: MultiplicityFn, K: int, nMax: int) -> IntervalSet:
    """``union_{k=0..K} B^k (S_1 + n)``, ``|n| <= nMax``, as exact intervals (d = 1, A > 0)."""
    if m.c < 1:
        return IntervalSet()
    s1 = m.s_set(1)
    base = IntervalSet([(lo + n, hi + n) for n in range(-nMax, nMax + 1) for lo, hi in s1])
    a = scheme.scalar
    out = IntervalSet()
    for k in range(K + 1):
        out = out | base.scaled(Fraction(a) ** k)
    return out


def delta_contains(scheme: DilationScheme, m: MultiplicityFn, x, K: int, nMax: int) -> bool:
    """Pointwise membership in the truncated ``Delta`` (any dimension)."""
    p = scheme.point(x)
    for k in range(K + 1):
        y = scheme.apply_B_power(p, -k)
        r = reduce_point(y)
        n = tuple(a - b for a, b in zip(y, r))
        if max(abs(c) for c in n) <= nMax and m.value(r) >= 1:
            return True
    return False


def check_delta_conditions(scheme: DilationScheme, m: MultiplicityFn, K: int = 4, nMax: int = 8,
                           P: int = 3, gridQ: int = 7 * 2 ** 8) -> Report:
    """Truncated checks of the translate-count and dilate-coverage conditions.

    ``Delta`` is replaced by ``union_{k<=K} B^k (S_1 + n)`` with ``|n| <= nMax``.
    The translate count ``#{n : w + n in Delta} >= m(w)`` is tested on the
    grid, and ``union_{|p|<=P} B^p Delta`` must cover the box
    ``B^P [-1/2, 1/2)^d``.
    """
    if min(K, nMax, P) < 1:
        raise ValueError("K, nMax and P must be at least 1")
    rep = Report("delta conditions")
    rep.data["depth"] = {"K": K, "nMax": nMax, "P": P}
    if m.c < 1:
        rep.add("translate count", False, detail="Delta is empty (m vanishes)")
        rep.add("dilate coverage", False, detail="Delta is empty (m vanishes)")
        return rep
    exact = m.is_piecewise and scheme.d == 1 and scheme.scalar > 0
    reach = _translate_reach(scheme, K, nMax)
    grid = scheme.grid(gridQ)
    worst = None
    if exact:
        delta = delta_approximation(scheme, m, K, nMax)
        counts = translate_count(delta)
        cuts = sorted(set(counts.breakpoints()) | set(m.breakpoints()))
        for w in cuts:
            if counts.value(w) < m.value(w):
                worst = ((w,), counts.value(w))
                break
    else:
        shifts = list(itertools.product(range(-reach, reach + 1), repeat=scheme.d))
        for w in grid:
            need = m.value(w)
            if need == 0:
                continue
            count = 0
            for n in shifts:
                if delta_contains(scheme, m, tuple(a + b for a, b in zip(w, n)), K, nMax):
                    count += 1
                    if count >= need:
                        break
            if count < need and worst is None:
                worst = (w, count)
    if worst is None:
        rep.add("translate count", True, detail=f"verified at depth (K={K}, nMax={nMax}, P={P})")
    else:
        rep.add("translate count", False, location=worst[0],
                detail=f"only {worst[1]} translates land in Delta")

    if exact:
        a = Fraction(scheme.scalar)
        cover = IntervalSet()
        for p in range(-P, P + 1):
            cover = cover | delta.scaled(a ** p)
        half = a ** P / 2
        gap = IntervalSet([(-half, half)]) - cover
        if gap.is_empty():
            rep.add("dilate coverage", True, detail=f"verified at depth (K={K}, nMax={nMax}, P={P})")
        else:
            rep.add("dilate coverage", False, location=gap.intervals[0][0],
                    detail=f"uncovered: {gap}")
    else:
        missing = None
        for w in grid:
            x = scheme.apply_B_power(w, P)
            if not any(delta_contains(scheme, m, scheme.apply_B_power(x, -p), K, nMax)
                       for p in range(-P, P + 1)):
                missing = x
                break
        rep.add("dilate coverage", missing is None, location=missing,
                detail=(f"verified at depth (K={K}, nMax={nMax}, P={P}) on the grid"
                        if missing is None else "grid point outside every dilate"))
    return rep


def translate_count(delta: IntervalSet) -> MultiplicityFn:
    """The torus function ``w -> #{n in Z : w + n in delta}`` (exact, d = 1)."""
    full = 0
    parts = []
    for lo, hi in delta:
        k = (hi - lo).__floor__()
        full += k
        if hi - lo > k:
            parts.append(IntervalSet([(lo + k, hi)]).wrapped())
    cuts = {-HALF, HALF}
    for p in parts:
        cuts.update(p.endpoints())
    cuts = sorted(cuts)
    pieces = [(a, b, full + sum(1 for p in parts if p.contains(a))) for a, b in zip(cuts, cuts[1:])]
    return MultiplicityFn(1, pieces=pieces)


def _translate_reach(scheme: DilationScheme, K: int, nMax: int) -> int:
    # every point of B^k(cube + n) with k <= K, |n| <= nMax lies within this sup-norm radius
    B = np.array(scheme.B, dtype=float)
    norm = max(np.max(np.sum(np.abs(np.linalg.matrix_power(B, k)), axis=1)) for k in range(K + 1))
    return int(np.ceil(norm * (nMax + 1))) + 1
