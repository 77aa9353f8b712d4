"""Exact arithmetic for filter values.

Values such as ``sqrt(2)``, ``1/sqrt(2)`` or ``(1 + i) sqrt(3) / 5`` are
represented as finite sums ``sum_r c_r sqrt(r)`` with squarefree positive
integers ``r`` and Gaussian-rational coefficients ``c_r``.  Square roots of
distinct squarefree integers are linearly independent over the Gaussian
rationals, so a value is zero exactly when every coefficient vanishes.  This
gives verification code a way to certify residuals of exactly zero.

Mixing an :class:`ExactValue` with a Python ``float`` or ``complex`` falls back
to ordinary complex arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = [
    "ExactValue",
    "as_value",
    "is_exact",
    "is_zero",
    "sqrt_exact",
    "to_complex",
]

_ZERO = Fraction(0)


def _squarefree_split(n: int) -> tuple[int, int]:
    """Write ``n = s*s*r`` with ``r`` squarefree; return ``(s, r)``."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    s, r = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            r *= p
        p += 1
    return s, r * n


class ExactValue:
    """Element of ``Q(i)`` adjoined with square roots of integers."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for r, (re, im) in terms.items():
                re, im = Fraction(re), Fraction(im)
                if re or im:
                    clean[int(r)] = (re, im)
        self._terms = clean
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def rational(cls, re=0, im=0) -> "ExactValue":
        return cls({1: (re, im)})

    @classmethod
    def sqrt(cls, q) -> "ExactValue":
        """Exact square root of a nonnegative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return cls()
        # sqrt(p/q) = sqrt(p*q)/q
        s, r = _squarefree_split(q.numerator * q.denominator)
        return cls({r: (Fraction(s, q.denominator), 0)})

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return set(self._terms) <= {1}

    def __complex__(self) -> complex:
        total = 0j
        for r, (re, im) in self._terms.items():
            root = math.sqrt(r)
            total += complex(float(re) * root, float(im) * root)
        return total

    def __float__(self) -> float:
        z = complex(self)
        return z.real

    def __abs__(self) -> float:
        return abs(complex(self))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, ExactValue):
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return ExactValue.rational(other)
        return None

    def __neg__(self):
        return ExactValue({r: (-a, -b) for r, (a, b) in self._terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other
        terms = dict(self._terms)
        for r, (a, b) in o._terms.items():
            c, d = terms.get(r, (_ZERO, _ZERO))
            terms[r] = (a + c, b + d)
        return ExactValue(terms)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) - other
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return other - complex(self)
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) * other
        terms = {}
        for r, (a, b) in self._terms.items():
            for s, (c, d) in o._terms.items():
                g = math.gcd(r, s)
                rad = (r // g) * (s // g)
                re, im = (a * c - b * d) * g, (a * d + b * c) * g
                e, f = terms.get(rad, (_ZERO, _ZERO))
                terms[rad] = (e + re, f + im)
        return ExactValue(terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return ExactValue({r: (a / q, b / q) for r, (a, b) in self._terms.items()})
        o = self._coerce(other)
        if o is not None and o.is_rational():
            a, b = o._terms.get(1, (_ZERO, _ZERO))
            den = a * a + b * b
            if den == 0:
                raise ZeroDivisionError("division by exact zero")
            return self * ExactValue.rational(a / den, -b / den)
        if o is not None and len(o._terms) == 1:
            # c sqrt(r): multiply by conj(c) sqrt(r) / (|c|^2 r)
            (r, (a, b)), = o._terms.items()
            den = (a * a + b * b) * r
            return self * ExactValue({r: (a / den, -b / den)})
        return complex(self) / complex(other)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / complex(self)
        return o / self

    def conjugate(self) -> "ExactValue":
        return ExactValue({r: (a, -b) for r, (a, b) in self._terms.items()})

    def abs2(self) -> "ExactValue":
        return self * self.conjugate()

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "ExactValue(0)"
        parts = []
        for r in sorted(self._terms):
            a, b = self._terms[r]
            coef = f"{a}" if not b else f"({a}{'+' if b >= 0 else '-'}{abs(b)}i)"
            parts.append(coef if r == 1 else f"{coef}*sqrt({r})")
        return "ExactValue(" + " + ".join(parts) + ")"


def sqrt_exact(q) -> ExactValue:
    return ExactValue.sqrt(q)


def as_value(v):
    """Normalize a filter value: rationals become exact, floats stay complex."""
    if isinstance(v, ExactValue):
        return v
    if isinstance(v, bool):
        return ExactValue.rational(int(v))
    if isinstance(v, (int, Fraction)):
        return ExactValue.rational(v)
    return complex(v)


def is_exact(v) -> bool:
    return isinstance(v, (ExactValue, int, Fraction))


def is_zero(v) -> bool:
    """Exact zero test for exact values, ``== 0`` for floats."""
    if isinstance(v, ExactValue):
        return v.is_zero()
    return v == 0


def to_complex(v) -> complex:
    return complex(v)
