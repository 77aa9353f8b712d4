"""M-systems, unitary sections and the loop-group action.

An M-system repackages a filter system as one vector per point of the
disjoint union of the sets ``S_j``: for ``w`` in ``S_j`` the vector
``M(j, w)`` collects ``h_{i,j}(w)`` for ``i <= m(alpha(w))`` followed by
``g_{k,j}(w)`` for ``k <= m_tilde(alpha(w))``.  A loop element is a field of
unitary matrices ``L(w)`` of size ``m(w) + m_tilde(w)`` with ``L(0) = I``;
it acts by ``(L . M)(j, w) = L(alpha(w)) M(j, w)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as F

import numpy as np

from .catalog import journe_canonical, journe_multiplicity
from .errors import DimensionMismatch, GmraError, InitialConditionViolated
from .exact import ExactValue
from .filters import FilterSystem, residual
from .funcalg import CallableFn, QmfHighpass, QmfLowpass
from .intervals import IntervalSet
from .lattice import make_scheme
from .multiplicity import MultiplicityPair

INITIAL_TOL = 1e-12


class MSystem:
    """Base class; subclasses provide :meth:`component`."""

    def __init__(self, mp: MultiplicityPair, scheme, name: str = "", exact: bool = False):
        self.mp = mp
        self.scheme = scheme
        self.name = name
        self.exact = exact

    def size(self, w) -> int:
        return self.mp.size(self.scheme.alpha(w))

    def in_domain(self, j: int, w) -> bool:
        return self.mp.m.value(w) >= j

    def component(self, j: int, w) -> list:
        raise NotImplementedError

    def component_array(self, j: int, w) -> np.ndarray:
        return np.array([complex(v) for v in self.component(j, w)], dtype=complex)


class FilterMSystem(MSystem):
    """The M-system read off a filter system."""

    def __init__(self, sys: FilterSystem):
        super().__init__(sys.mp, sys.scheme, sys.name, sys.exact)
        self.backing = sys

    def component(self, j: int, w) -> list:
        if not self.in_domain(j, w):
            raise ValueError(f"{w} is not in S_{j}")
        aw = self.scheme.alpha(w)
        m, mt = self.mp.m.value(aw), self.mp.m_tilde.value(aw)
        sys = self.backing
        return ([sys.H[i][j - 1].value(w) for i in range(m)]
                + [sys.G[k][j - 1].value(w) for k in range(mt)])


class ActedMSystem(MSystem):
    """``L . M`` evaluated lazily."""

    def __init__(self, loop: "LoopElement", base: MSystem, name: str = ""):
        super().__init__(base.mp, base.scheme, name or f"{loop.name}.{base.name}", False)
        self.loop = loop
        self.base = base

    def component(self, j: int, w) -> list:
        v = self.base.component_array(j, w)
        L = self.loop.matrix(self.scheme.alpha(w))
        if L.shape != (len(v), len(v)):
            raise DimensionMismatch(f"loop block {L.shape} against a vector of length {len(v)} at {w}")
        return list(L @ v)


def msystem_from_filters(sys: FilterSystem, canonical=None) -> MSystem:
    """M-system of ``sys``; with a canonical reference the values at the ``zeta_l`` must agree."""
    M = FilterMSystem(sys)
    if canonical is not None:
        ref = canonical if isinstance(canonical, MSystem) else FilterMSystem(canonical)
        check_initial_conditions(M, ref)
    return M


def check_initial_conditions(M: MSystem, ref: MSystem) -> None:
    for zeta in M.scheme.zetas:
        for j in range(1, M.mp.c + 1):
            if not M.in_domain(j, zeta):
                continue
            a, b = M.component(j, zeta), ref.component(j, zeta)
            if len(a) != len(b) or any(residual(x - y) > INITIAL_TOL for x, y in zip(a, b)):
                raise InitialConditionViolated(
                    f"M({j}, {zeta}) = {[complex(x) for x in a]} differs from the reference "
                    f"{[complex(x) for x in b]}")


def filters_from_msystem(M: MSystem, name: str = "") -> FilterSystem:
    """Filter system whose M-system is ``M`` (entries evaluate ``M`` lazily)."""
    mp, scheme = M.mp, M.scheme
    zero = ExactValue()

    def entry(row: int, j: int, high: bool):
        def fn(w):
            if not M.in_domain(j, w):
                return zero
            aw = scheme.alpha(w)
            m = mp.m.value(aw)
            limit = mp.m_tilde.value(aw) if high else m
            if row >= limit:
                return zero
            return M.component(j, w)[m + row if high else row]
        return CallableFn(fn, d=scheme.d, exact=M.exact, name=f"{'g' if high else 'h'}{row + 1}{j}")

    H = [[entry(i, j, False) for j in range(1, mp.c + 1)] for i in range(mp.c)]
    G = [[entry(k, j, True) for j in range(1, mp.c + 1)] for k in range(mp.c_tilde)]
    return FilterSystem(scheme, mp, H, G, name or M.name)


@dataclass
class SectionMatrix:
    """``L(w)`` assembled from an M-system, with its column labels ``(l, j)``."""

    omega: tuple
    matrix: np.ndarray
    col_map: list
    defect: float
    values: list


def msystem_to_unitary_section(M: MSystem, w) -> SectionMatrix:
    """``L_{i, lambda(l, j)}(w) = M_i(j, w_l) / sqrt(N)`` in lexicographic ``(l, j)`` order."""
    from .filters import unitarity_defect

    w = M.scheme.point(w)
    pre = M.scheme.preimages(w)
    N = M.scheme.N
    scale = ExactValue.sqrt(F(1, N))
    cols, labels = [], []
    for l, p in enumerate(pre):
        for j in range(1, M.mp.c + 1):
            if M.in_domain(j, p):
                labels.append((l, j))
                cols.append([v * scale if isinstance(v, ExactValue) else complex(v) / math.sqrt(N)
                             for v in M.component(j, p)])
    n = M.mp.size(w)
    if len(cols) != n or any(len(c) != n for c in cols):
        raise DimensionMismatch(f"at {w}: {len(cols)} columns for a block of size {n}")
    values = [[cols[c][r] for c in range(n)] for r in range(n)]
    mat = np.array([[complex(v) for v in row] for row in values], dtype=complex).reshape(n, n)
    return SectionMatrix(w, mat, labels, unitarity_defect(mat, values), values)


class LoopElement:
    """Field of unitary blocks ``w -> L(w)`` of size ``m(w) + m_tilde(w)``."""

    def __init__(self, mp: MultiplicityPair, scheme, fn, name: str = "loop"):
        self.mp = mp
        self.scheme = scheme
        self._fn = fn
        self.name = name

    def matrix(self, w) -> np.ndarray:
        w = self.scheme.point(w)
        L = np.asarray(self._fn(w), dtype=complex)
        n = self.mp.size(w)
        return L.reshape(n, n)

    __call__ = matrix

    def product(self, other: "LoopElement") -> "LoopElement":
        _same_pair(self.mp, other.mp)
        return LoopElement(self.mp, self.scheme, lambda w: self.matrix(w) @ other.matrix(w),
                           f"{self.name}*{other.name}")

    def adjoint(self) -> "LoopElement":
        return LoopElement(self.mp, self.scheme, lambda w: self.matrix(w).conj().T,
                           f"{self.name}^*")

    def unitarity_defect(self, w) -> float:
        L = self.matrix(w)
        if L.size == 0:
            return 0.0
        eye = np.eye(L.shape[0])
        return float(max(np.max(np.abs(L.conj().T @ L - eye)), np.max(np.abs(L @ L.conj().T - eye))))

    def identity_deviation(self, w) -> float:
        L = self.matrix(w)
        return float(np.max(np.abs(L - np.eye(L.shape[0])), initial=0.0))


def _same_pair(a: MultiplicityPair, b: MultiplicityPair):
    if a != b:
        raise DimensionMismatch("loop elements and M-systems must share the multiplicity pair")


def identity_loop(mp: MultiplicityPair, scheme) -> LoopElement:
    return LoopElement(mp, scheme, lambda w: np.eye(mp.size(w), dtype=complex), "identity")


def diagonal_phase_loop(mp: MultiplicityPair, scheme, frequencies) -> LoopElement:
    """``diag(exp(2 pi i r_t w_1))`` with integer ``r_t``; equals the identity at 0."""
    freqs = [int(r) for r in frequencies]

    def fn(w):
        n = mp.size(w)
        x = float(w[0])
        return np.diag([np.exp(2j * np.pi * freqs[t % len(freqs)] * x) for t in range(n)])

    return LoopElement(mp, scheme, fn, f"phase{tuple(freqs)}")


def loop_act(L: LoopElement, M: MSystem) -> MSystem:
    _same_pair(L.mp, M.mp)
    return ActedMSystem(L, M)


def loop_quotient(M: MSystem, Mt: MSystem) -> LoopElement:
    """``L = L_{Mt} L_M^*`` so that ``loop_act(L, M) = Mt``."""
    _same_pair(M.mp, Mt.mp)

    def fn(w):
        a = msystem_to_unitary_section(M, w).matrix
        b = msystem_to_unitary_section(Mt, w).matrix
        return b @ a.conj().T

    return LoopElement(M.mp, M.scheme, fn, f"quotient({M.name},{Mt.name})")


def max_deviation(M1: MSystem, M2: MSystem, points) -> float:
    """Largest entry difference of two M-systems over the sampled points of every ``S_j``."""
    worst = 0.0
    for w in points:
        for j in range(1, M1.mp.c + 1):
            if not M1.in_domain(j, w):
                continue
            a, b = M1.component_array(j, w), M2.component_array(j, w)
            if a.shape != b.shape:
                raise DimensionMismatch(f"component sizes differ at {w}")
            if a.size:
                worst = max(worst, float(np.max(np.abs(a - b))))
    return worst


# ---------------------------------------------------------------------------
# Journe data


def _pm(a, b):
    return [(-F(b), -F(a)), (F(a), F(b))]


JOURNE_T = {
    (1, 1): IntervalSet(_pm(F(1, 7), F(3, 14))),
    (1, 2): IntervalSet(_pm(F(1, 14), F(1, 7)) + _pm(F(3, 14), F(2, 7))),
    (1, 3): IntervalSet([(F(-1, 14), F(1, 14))] + _pm(F(3, 7), F(1, 2))),
    (2, 2): IntervalSet(_pm(F(1, 14), F(1, 7))),
    (2, 3): IntervalSet([(F(-1, 14), F(1, 14))]),
}

# piece -> (m(x), m(x/2), m((x+1)/2))
JOURNE_P = {
    1: (IntervalSet([(F(-1, 7), F(1, 7))]), (2, 2, 1)),
    2: (IntervalSet(_pm(F(1, 7), F(2, 7))), (1, 2, 0)),
    3: (IntervalSet(_pm(F(2, 7), F(3, 7))), (0, 1, 0)),
    4: (IntervalSet(_pm(F(3, 7), F(1, 2))), (1, 1, 1)),
}

_R2 = ExactValue.sqrt(2)
_Z = ExactValue()

# (j, set, listed vector) for the canonical M-system
JOURNE_MJ_LISTING = [
    (1, JOURNE_T[(1, 1)], [_R2]),
    (1, IntervalSet(_pm(F(1, 14), F(1, 7)) + _pm(F(1, 4), F(2, 7))), [_R2, _Z]),
    (1, IntervalSet(_pm(F(3, 14), F(1, 4))), [_Z, _R2]),
    (1, JOURNE_T[(1, 3)] - JOURNE_T[(2, 3)], [_Z, _R2, _Z]),
    (1, JOURNE_T[(1, 3)] & JOURNE_T[(2, 3)], [_R2, _Z, _Z]),
    (2, JOURNE_T[(2, 2)], [_Z, _R2]),
    (2, JOURNE_T[(2, 3)], [_Z, _Z, _R2]),
]


def _cells(sets):
    cuts = {F(-1, 2), F(1, 2)}
    for s in sets:
        cuts.update(s.endpoints())
    cuts = sorted(cuts)
    return [(a + b) / 2 for a, b in zip(cuts, cuts[1:])] + cuts[:-1]


def _cross_check_journe_tables():
    scheme = make_scheme(2)
    m = journe_multiplicity()
    mt = 1
    sets = list(JOURNE_T.values()) + [p for p, _ in JOURNE_P.values()]
    for x in _cells(sets):
        x2 = scheme.alpha((x,))
        total = m.value(x2) + mt
        for (i, k), T in JOURNE_T.items():
            expected = m.value((x,)) >= i and total == k
            if T.contains(x) != expected:
                raise GmraError(f"Journe table T_{i},{k} disagrees with m at {x}")
        pre = scheme.preimages((x,))
        for idx, (P, (mx, m0, m1)) in JOURNE_P.items():
            if P.contains(x) and (m.value((x,)), m.value(pre[0]), m.value(pre[1])) != (mx, m0, m1):
                raise GmraError(f"Journe piece P_{idx} annotation disagrees with m at {x}")
    covered = IntervalSet()
    for P, _ in JOURNE_P.values():
        covered = covered | P
    if not covered.covers(F(-1, 2), F(1, 2)):
        raise GmraError("Journe pieces do not cover the torus")


_cross_check_journe_tables()


def canonical_journe_msystem() -> MSystem:
    return msystem_from_filters(journe_canonical())


def _piece_index(x) -> int:
    for idx, (P, _) in JOURNE_P.items():
        if P.contains(x):
            return idx
    raise AssertionError(f"{x} is in no Journe piece")


def journe_loop_element(p0: QmfLowpass | None = None, row_phase="auto") -> LoopElement:
    """The loop element carrying the canonical Journe system to the smooth one.

    ``row_phase`` multiplies the high-pass (last) row on every piece.
    ``"auto"`` picks the unimodular constant that makes ``L(0)`` the
    identity; ``1`` reproduces the raw matrices.
    """
    p0 = p0 or QmfLowpass()
    p1 = QmfHighpass(p0)
    root = math.sqrt(2.0)

    def t0(y):
        return complex(p0.value(y)) / root

    def t1(y):
        return complex(p1.value(y)) / root

    if row_phase == "auto":
        corner = t1(F(1, 2))
        phase = corner.conjugate() / abs(corner)
    else:
        phase = complex(row_phase)

    def fn(w):
        x = F(w[0])
        lo, hi = x / 2, (x + 1) / 2
        idx = _piece_index(x)
        if idx == 1:
            L = [[t0(lo), 0, t0(hi)], [0, 1, 0], [t1(lo), 0, t1(hi)]]
        elif idx == 2:
            L = [[t0(lo), t0(hi)], [t1(lo), t1(hi)]]
        elif idx == 3:
            L = [[t1(lo)]]
        else:
            L = [[t0(hi), t0(lo)], [t1(hi), t1(lo)]]
        L = np.array(L, dtype=complex)
        L[-1, :] *= phase
        return L

    mp = MultiplicityPair(journe_multiplicity(), _journe_mtilde())
    return LoopElement(mp, make_scheme(2), fn, "L_p")


def _journe_mtilde():
    from .catalog import journe_pair
    return journe_pair().m_tilde


def journe_row_phase(p0: QmfLowpass | None = None) -> complex:
    """The constant applied to the high-pass row by ``journe_loop_element(row_phase="auto")``."""
    p1 = QmfHighpass(p0 or QmfLowpass())
    corner = complex(p1.value(F(1, 2))) / math.sqrt(2.0)
    return corner.conjugate() / abs(corner)
