"""Shipped example filter systems for dilation by 2 on the line.

* ``ex35`` - one low-pass and one high-pass filter, both indicator valued.
* ``journe_canonical`` - the canonical filters of the Journe multiplicity.
* ``journe_smooth`` - smooth filters for the same multiplicity built from a
  QMF pair ``(p0, p1)``.
* ``classical_qmf`` - the MRA pair ``(p0, p1)`` itself.
"""

from __future__ import annotations

from fractions import Fraction as F

from .exact import ExactValue
from .filters import FilterSystem, make_filter_system
from .funcalg import (Masked, QmfHighpass, QmfLowpass, Shifted, ZeroFn, pc_from_pieces)
from .intervals import IntervalSet
from .lattice import make_scheme
from .multiplicity import MultiplicityFn, MultiplicityPair, make_pair

ROOT2 = ExactValue.sqrt(2)
HALF = F(1, 2)

JOURNE_S1 = IntervalSet([(-HALF, F(-3, 7)), (F(-2, 7), F(2, 7)), (F(3, 7), HALF)])
JOURNE_S2 = IntervalSet([(F(-1, 7), F(1, 7))])


def ex35_filters():
    h = pc_from_pieces([((F(-1, 8), F(1, 8)), ROOT2), ((F(1, 4), F(3, 8)), ROOT2, True)])
    g = pc_from_pieces([((F(1, 8), F(1, 4)), ROOT2, True), ((F(3, 8), HALF), ROOT2, True)])
    return h, g


def ex35(**kw) -> FilterSystem:
    scheme = make_scheme(2)
    one = MultiplicityFn.constant(1)
    h, g = ex35_filters()
    return make_filter_system(scheme, MultiplicityPair(one, one), [[h]], [[g]], name="ex35", **kw)


def journe_multiplicity() -> MultiplicityFn:
    return MultiplicityFn.from_sets([JOURNE_S1, JOURNE_S2])


def journe_pair() -> MultiplicityPair:
    return make_pair(make_scheme(2), journe_multiplicity())


def journe_canonical_filters():
    h11 = pc_from_pieces([((F(-2, 7), F(-1, 4)), ROOT2), ((F(-1, 7), F(1, 7)), ROOT2),
                          ((F(1, 4), F(2, 7)), ROOT2)])
    h21 = pc_from_pieces([((F(3, 7), HALF), ROOT2, True)])
    g11 = pc_from_pieces([((F(1, 7), F(1, 4)), ROOT2, True)])
    g12 = pc_from_pieces([((F(-1, 7), F(1, 7)), ROOT2)])
    zero = pc_from_pieces([])
    return [[h11, zero], [h21, zero]], [[g11, g12]]


def journe_canonical(**kw) -> FilterSystem:
    H, G = journe_canonical_filters()
    return make_filter_system(make_scheme(2), journe_pair(), H, G, name="journe_canonical", **kw)


def journe_smooth_filters(epsilon=F(1, 100), highpass_sign: int = 1):
    """Smooth Journe filters; ``highpass_sign=-1`` negates the high-pass row."""
    p0 = QmfLowpass(epsilon)
    p1 = QmfHighpass(p0)
    inner = IntervalSet([(F(-2, 7), F(2, 7))])
    core = IntervalSet([(F(-1, 7), F(1, 7))])
    h11 = Masked(p0, inner)
    h12 = Masked(Shifted(p0, HALF), core)
    h21 = pc_from_pieces([((F(3, 7), HALF), ROOT2, True)])
    g11 = Masked(p1, inner)
    g12 = Masked(Shifted(p1, HALF), core)
    if highpass_sign == -1:
        g11, g12 = -1 * g11, -1 * g12
    return [[h11, h12], [h21, ZeroFn()]], [[g11, g12]]


def journe_smooth(epsilon=F(1, 100), highpass_sign: int = 1, **kw) -> FilterSystem:
    H, G = journe_smooth_filters(epsilon, highpass_sign)
    return make_filter_system(make_scheme(2), journe_pair(), H, G, name="journe_smooth", **kw)


def classical_qmf(epsilon=F(1, 100), **kw) -> FilterSystem:
    p0 = QmfLowpass(epsilon)
    one = MultiplicityFn.constant(1)
    return make_filter_system(make_scheme(2), MultiplicityPair(one, one), [[p0]],
                              [[QmfHighpass(p0)]], name="classical_qmf", **kw)


BUILTIN_SYSTEMS = {
    "ex35": ex35,
    "journe_canonical": journe_canonical,
    "journe_smooth": journe_smooth,
    "classical_qmf": classical_qmf,
}
