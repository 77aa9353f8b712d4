"""Exact geometry of an integer dilation acting on the torus ``[-1/2, 1/2)^d``.

Points are tuples of :class:`fractions.Fraction`.  Functions that accept a
point also accept a bare rational when ``d == 1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigError, DepthOverflow, NonExpansive, SingularMatrix

HALF = Fraction(1, 2)
DEFAULT_DEPTH_CAP = 2 ** 20

Point = tuple


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, an integer, or a decimal string into a Fraction.

    Floats are rejected because geometry must be exact.
    """
    if isinstance(text, bool):
        raise ConfigError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"not a rational: {text!r}") from exc
    raise ConfigError(f"rationals must be given as 'p/q' strings or integers, got {text!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def reduce_scalar(x) -> Fraction:
    """Representative of ``x`` modulo 1 in ``[-1/2, 1/2)``."""
    x = Fraction(x)
    return x - math.floor(x + HALF)


def reduce_point(p) -> Point:
    return tuple(reduce_scalar(c) for c in p)


def as_point(x, d: int = 1) -> Point:
    """Coerce a scalar or sequence of rationals to a ``d``-tuple of Fractions."""
    if isinstance(x, (tuple, list)):
        if len(x) != d:
            raise ValueError(f"expected a point of dimension {d}, got {len(x)}")
        return tuple(Fraction(c) for c in x)
    if d != 1:
        raise ValueError(f"scalar given where a point of dimension {d} is needed")
    return (Fraction(x),)


def _det(mat) -> Fraction:
    """Exact determinant by fraction Gaussian elimination."""
    m = [[Fraction(v) for v in row] for row in mat]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def _inverse(mat):
    n = len(mat)
    m = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def _matvec(mat, v):
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in mat)


@dataclass(frozen=True)
class DilationScheme:
    """Expansive integer matrix ``A`` with the derived torus data.

    ``B`` is the transpose of ``A`` and acts on the torus; ``N = |det A|``.
    ``coset_reps`` lists representatives of ``Z^d / B Z^d`` (first is zero)
    and ``zetas`` the reduced points ``B^{-1} xi`` (first is zero).
    """

    A: tuple
    d: int
    B: tuple = field(repr=False)
    N: int
    B_inv: tuple = field(repr=False)
    coset_reps: tuple = field(repr=False)
    zetas: tuple = field(repr=False)
    depth_cap: int = field(default=DEFAULT_DEPTH_CAP, repr=False, compare=False)

    # --- basic maps -------------------------------------------------------
    @property
    def scalar(self) -> int | None:
        """The dilation factor when ``d == 1``, else ``None``."""
        return self.A[0][0] if self.d == 1 else None

    def point(self, x) -> Point:
        return as_point(x, self.d)

    def apply_B(self, x) -> Point:
        return _matvec(self.B, self.point(x))

    def apply_B_inv(self, x) -> Point:
        return _matvec(self.B_inv, self.point(x))

    def apply_B_power(self, x, k: int) -> Point:
        """``B^k x`` for any integer ``k`` (exact, not reduced)."""
        p = self.point(x)
        mat = self.B if k >= 0 else self.B_inv
        for _ in range(abs(k)):
            p = _matvec(mat, p)
        return p

    def alpha(self, w) -> Point:
        return reduce_point(self.apply_B(w))

    def sigma(self, w) -> Point:
        return self.apply_B_inv(reduce_point(self.point(w)))

    def preimages(self, w) -> list:
        s = self.sigma(w)
        return [reduce_point(tuple(a + b for a, b in zip(s, z))) for z in self.zetas]

    def preimages_n(self, w, n: int) -> list:
        if n < 1:
            raise ValueError("depth must be at least 1")
        if self.N ** n > self.depth_cap:
            raise DepthOverflow(f"N^n = {self.N ** n} exceeds cap {self.depth_cap}")
        first = self.preimages(w)
        if n == 1:
            return first
        # label s*N + q  <->  s-th depth-(n-1) preimage of the q-th first preimage
        below = [self.preimages_n(y, n - 1) for y in first]
        return [below[q][s] for s in range(self.N ** (n - 1)) for q in range(self.N)]

    def grid(self, Q: int) -> list:
        return rational_grid(self, Q)


def make_scheme(A, depth_cap: int = DEFAULT_DEPTH_CAP) -> DilationScheme:
    """Build a :class:`DilationScheme` from an integer matrix (or integer, d=1)."""
    if isinstance(A, int):
        A = [[A]]
    try:
        rows = [list(r) for r in A]
    except TypeError as exc:
        raise ConfigError("dilation matrix must be a list of integer rows") from exc
    d = len(rows)
    if d == 0 or any(len(r) != d for r in rows):
        raise ConfigError("dilation matrix must be square")
    for r in rows:
        for v in r:
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ConfigError(f"dilation matrix entries must be integers, got {v!r}")
    A_t = tuple(tuple(int(v) for v in r) for r in rows)
    det = _det(A_t)
    if det == 0:
        raise SingularMatrix("det A = 0")
    eig = np.linalg.eigvals(np.array(A_t, dtype=float))
    if np.min(np.abs(eig)) <= 1 + 1e-9:
        raise NonExpansive(f"eigenvalue of modulus {np.min(np.abs(eig)):.6g} <= 1")
    N = abs(int(det))
    B = tuple(tuple(A_t[j][i] for j in range(d)) for i in range(d))
    B_inv = _inverse(B)
    reps = []
    for cand in itertools.product(range(N), repeat=d):
        v = tuple(reversed(cand))  # first coordinate varies fastest
        if all(not _is_lattice(_matvec(B_inv, tuple(a - b for a, b in zip(v, r)))) for r in reps):
            reps.append(v)
            if len(reps) == N:
                break
    zetas = tuple(reduce_point(_matvec(B_inv, r)) for r in reps)
    return DilationScheme(A=A_t, d=d, B=B, N=N, B_inv=B_inv,
                          coset_reps=tuple(reps), zetas=zetas, depth_cap=depth_cap)


def _is_lattice(p) -> bool:
    return all(c.denominator == 1 for c in p)


def alpha(scheme: DilationScheme, w) -> Point:
    """``B w`` reduced into the torus."""
    return scheme.alpha(w)


def preimages(scheme: DilationScheme, w) -> list:
    """The ``N`` preimages ``sigma(w) + zeta_l`` of ``w`` under ``alpha``."""
    return scheme.preimages(w)


def preimages_n(scheme: DilationScheme, w, n: int) -> list:
    """All ``N^n`` preimages under ``alpha^n`` with the ``s*N + q`` labeling."""
    return scheme.preimages_n(w, n)


def rational_grid(scheme: DilationScheme, Q: int) -> list:
    """The ``Q^d`` points ``k/Q`` reduced into the torus, first coordinate fastest."""
    if Q < 1:
        raise ValueError("Q must be positive")
    pts = []
    for ks in itertools.product(range(Q), repeat=scheme.d):
        pts.append(tuple(reduce_scalar(Fraction(k, Q)) for k in reversed(ks)))
    return pts
