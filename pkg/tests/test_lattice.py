from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import rationals
from gmrawave.errors import ConfigError, NonExpansive, SingularMatrix
from gmrawave.lattice import format_rational, make_scheme, parse_rational, reduce_point, reduce_scalar

MATRICES = [2, 3, -2, [[1, 1], [-1, 1]], [[2, 0], [0, 2]], [[0, 1], [2, 0]]]


@given(rationals(max_den=97, lo=-20, hi=20))
def test_reduce_lands_in_half_open_torus(x):
    r = reduce_scalar(x)
    assert F(-1, 2) <= r < F(1, 2)
    assert (x - r).denominator == 1


def test_reduce_half_goes_to_minus_half():
    assert reduce_scalar(F(1, 2)) == F(-1, 2)
    assert reduce_scalar(F(-1, 2)) == F(-1, 2)
    assert reduce_point((F(3, 2), F(5, 4))) == (F(-1, 2), F(1, 4))


@pytest.mark.parametrize("A", MATRICES)
def test_scheme_counts(A):
    s = make_scheme(A)
    assert len(s.zetas) == s.N
    assert all(c == 0 for c in s.zetas[0])
    assert len(set(s.zetas)) == s.N


@pytest.mark.parametrize("A", MATRICES)
@given(data=st.data())
def test_preimages_map_back(A, data):
    s = make_scheme(A)
    w = tuple(data.draw(rationals(max_den=60, lo=-1, hi=1)) for _ in range(s.d))
    w = reduce_point(w)
    pre = s.preimages(w)
    assert len(pre) == s.N == len(set(pre))
    for p in pre:
        assert s.alpha(p) == w


@given(rationals(max_den=50, lo=-1, hi=1))
def test_dyadic_preimage_order(x):
    s = make_scheme(2)
    w = reduce_scalar(x)
    lo, hi = s.preimages(w)
    assert lo == (reduce_scalar(w / 2),)
    assert hi == (reduce_scalar((w + 1) / 2),)


@given(rationals(max_den=30, lo=-1, hi=1), st.integers(1, 4))
def test_iterated_preimages(x, n):
    s = make_scheme(3)
    w = reduce_point(s.point(x))
    pts = s.preimages_n(w, n)
    assert len(pts) == 3 ** n
    for p in pts:
        y = p
        for _ in range(n):
            y = s.alpha(y)
        assert y == w


@pytest.mark.parametrize("A, err", [(1, NonExpansive), ([[1, 0], [0, 2]], NonExpansive),
                                    ([[2, 0], [0, 0]], SingularMatrix), (0, SingularMatrix),
                                    ("x", ConfigError)])
def test_bad_matrices(A, err):
    with pytest.raises(err):
        make_scheme(A)


def test_grid_size():
    assert len(make_scheme(2).grid(7 * 2 ** 8)) == 1792
    assert len(make_scheme([[1, 1], [-1, 1]]).grid(8)) == 64


@given(rationals(max_den=1000, lo=-50, hi=50))
def test_rational_text_round_trip(q):
    assert parse_rational(format_rational(q)) == q


@pytest.mark.parametrize("bad", [1.5, "a/b", "1/0", True, None])
def test_rejects_inexact_or_malformed(bad):
    with pytest.raises(ConfigError):
        parse_rational(bad)
