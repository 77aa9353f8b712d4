from fractions import Fraction as F

from hypothesis import given, strategies as st

from gmrawave.intervals import IntervalSet

pts = st.fractions(min_value=-2, max_value=2, max_denominator=16)


@st.composite
def interval_sets(draw):
    out = []
    for _ in range(draw(st.integers(0, 4))):
        a, b = draw(pts), draw(pts)
        if a != b:
            out.append((min(a, b), max(a, b)))
    return IntervalSet(out)


@given(interval_sets(), interval_sets(), pts)
def test_boolean_algebra_pointwise(a, b, x):
    assert (a | b).contains(x) == (a.contains(x) or b.contains(x))
    assert (a & b).contains(x) == (a.contains(x) and b.contains(x))
    assert (a - b).contains(x) == (a.contains(x) and not b.contains(x))


@given(interval_sets(), interval_sets())
def test_measure_is_additive(a, b):
    assert (a | b).measure() + (a & b).measure() == a.measure() + b.measure()


@given(interval_sets())
def test_canonical_form_is_disjoint_and_sorted(a):
    ivs = list(a)
    for (lo0, hi0), (lo1, hi1) in zip(ivs, ivs[1:]):
        assert hi0 < lo1
    assert all(lo < hi for lo, hi in ivs)


@given(interval_sets(), st.fractions(min_value=F(1, 4), max_value=4, max_denominator=8), pts)
def test_scaling(a, s, x):
    assert a.scaled(s).contains(x * s) == a.contains(x)


@given(interval_sets(), pts)
def test_wrapping_onto_the_torus(a, x):
    w = a.wrapped()
    assert w.measure() <= a.measure()
    for lo, hi in w:
        assert F(-1, 2) <= lo < hi <= F(1, 2)


def test_wrap_example():
    assert IntervalSet([(F(2, 5), F(3, 5))]).wrapped() == IntervalSet(
        [(F(-1, 2), F(-2, 5)), (F(2, 5), F(1, 2))])


def test_half_open_membership():
    s = IntervalSet([(F(-1, 4), F(1, 4))])
    assert s.contains(F(-1, 4)) and not s.contains(F(1, 4))
    assert IntervalSet([(0, F(1, 2)), (F(1, 4), 1)]) == IntervalSet([(0, 1)])
