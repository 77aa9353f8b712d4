from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def rationals(max_den=64, lo=-4, hi=4):
    return st.builds(
        Fraction,
        st.integers(lo * max_den, hi * max_den),
        st.integers(1, max_den),
    )


def torus_points(max_den=256):
    return st.integers(1, max_den).flatmap(
        lambda q: st.integers(-(q // 2) if q % 2 else -(q // 2), (q - 1) // 2).map(lambda p: Fraction(p, q)))


@pytest.fixture(scope="session")
def ex35():
    from gmrawave.catalog import ex35
    return ex35()


@pytest.fixture(scope="session")
def journe():
    from gmrawave.catalog import journe_canonical
    return journe_canonical()


@pytest.fixture(scope="session")
def journe_smooth():
    from gmrawave.catalog import journe_smooth
    return journe_smooth()
