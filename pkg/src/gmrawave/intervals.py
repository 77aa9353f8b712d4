"""Finite unions of half-open rational intervals ``[a, b)``."""

from __future__ import annotations

import bisect
from fractions import Fraction

import numpy as np

from .errors import InvalidInterval

HALF = Fraction(1, 2)


def _merge(intervals):
    out = []
    for lo, hi in sorted(intervals):
        if lo >= hi:
            continue
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


class IntervalSet:
    """Canonical (sorted, disjoint, non-adjacent) union of ``[lo, hi)`` intervals.

    Instances are immutable and compare equal exactly when they describe the
    same subset of the real line.
    """

    __slots__ = ("intervals", "_los", "_float_edges")

    def __init__(self, intervals=()):
        ivs = []
        for lo, hi in intervals:
            lo, hi = Fraction(lo), Fraction(hi)
            if lo > hi:
                raise InvalidInterval(f"interval [{lo}, {hi}) has lo > hi")
            ivs.append((lo, hi))
        self.intervals = _merge(ivs)
        self._los = [lo for lo, _ in self.intervals]
        self._float_edges = None

    @classmethod
    def torus(cls) -> "IntervalSet":
        return cls([(-HALF, HALF)])

    @classmethod
    def symmetric(cls, a, b) -> "IntervalSet":
        """The set ``[-b, -a) u [a, b)``."""
        a, b = Fraction(a), Fraction(b)
        if a >= b:
            raise InvalidInterval(f"symmetric interval needs a < b, got {a}, {b}")
        return cls([(-b, -a), (a, b)])

    # set algebra --------------------------------------------------------
    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.intervals + other.intervals)

    __or__ = union

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo < hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(out)

    __and__ = intersection

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for lo, hi in self.intervals:
            cur = lo
            for olo, ohi in other.intervals:
                if ohi <= cur or olo >= hi:
                    continue
                if olo > cur:
                    out.append((cur, olo))
                cur = max(cur, ohi)
                if cur >= hi:
                    break
            if cur < hi:
                out.append((cur, hi))
        return IntervalSet(out)

    __sub__ = difference

    def complement_in(self, lo, hi) -> "IntervalSet":
        return IntervalSet([(lo, hi)]) - self

    # transformations ----------------------------------------------------
    def scaled(self, factor) -> "IntervalSet":
        """Image under ``x -> factor * x`` for a positive rational factor."""
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("scaling keeps half-open orientation only for factor > 0")
        return IntervalSet([(lo * factor, hi * factor) for lo, hi in self.intervals])

    def shifted(self, t) -> "IntervalSet":
        t = Fraction(t)
        return IntervalSet([(lo + t, hi + t) for lo, hi in self.intervals])

    def wrapped(self) -> "IntervalSet":
        """Reduce modulo 1 into the fundamental domain ``[-1/2, 1/2)``."""
        out = []
        for lo, hi in self.intervals:
            if hi - lo >= 1:
                return IntervalSet.torus()
            shift = -((lo + HALF).__floor__())
            lo2, hi2 = lo + shift, hi + shift
            if hi2 <= HALF:
                out.append((lo2, hi2))
            else:
                out.append((lo2, HALF))
                out.append((-HALF, hi2 - 1))
        return IntervalSet(out)

    def periodized(self, lo, hi) -> "IntervalSet":
        """All integer translates of a torus subset, restricted to ``[lo, hi)``."""
        lo, hi = Fraction(lo), Fraction(hi)
        first = (lo - HALF).__floor__()
        last = (hi + HALF).__ceil__()
        pieces = []
        for n in range(first, last + 1):
            pieces.extend((a + n, b + n) for a, b in self.intervals)
        return IntervalSet(pieces) & IntervalSet([(lo, hi)])

    # queries ------------------------------------------------------------
    def contains(self, x) -> bool:
        x = Fraction(x)
        k = bisect.bisect_right(self._los, x) - 1
        return k >= 0 and x < self.intervals[k][1]

    __contains__ = contains

    def contains_many(self, xs) -> np.ndarray:
        """Vectorized membership for float samples."""
        if self._float_edges is None:
            los = np.array([float(a) for a, _ in self.intervals])
            his = np.array([float(b) for _, b in self.intervals])
            self._float_edges = (los, his)
        los, his = self._float_edges
        xs = np.asarray(xs, dtype=float)
        if los.size == 0:
            return np.zeros(xs.shape, dtype=bool)
        k = np.searchsorted(los, xs, side="right") - 1
        ok = k >= 0
        kk = np.where(ok, k, 0)
        return ok & (xs < his[kk])

    def distance_to_boundary(self, x) -> Fraction:
        """Distance from ``x`` to the nearest endpoint (zero at endpoints)."""
        x = Fraction(x)
        if not self.intervals:
            return None
        return min(min(abs(x - lo), abs(x - hi)) for lo, hi in self.intervals)

    def endpoints(self) -> list:
        pts = set()
        for lo, hi in self.intervals:
            pts.add(lo)
            pts.add(hi)
        return sorted(pts)

    def measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    def is_empty(self) -> bool:
        return not self.intervals

    def covers(self, lo, hi) -> bool:
        return (IntervalSet([(lo, hi)]) - self).is_empty()

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __repr__(self):
        if not self.intervals:
            return "IntervalSet(empty)"
        return "IntervalSet(" + " u ".join(f"[{a}, {b})" for a, b in self.intervals) + ")"
