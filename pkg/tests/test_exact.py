import math
from fractions import Fraction as F

from hypothesis import given, strategies as st

from gmrawave.exact import ExactValue

small = st.fractions(min_value=-5, max_value=5, max_denominator=12)
radicands = st.sampled_from([1, 2, 3, 5, 6, 7, 8, F(1, 2), F(3, 4)])


@st.composite
def exact_values(draw):
    v = ExactValue()
    for _ in range(draw(st.integers(0, 3))):
        v = v + ExactValue.sqrt(draw(radicands)) * ExactValue.rational(draw(small), draw(small))
    return v


def test_square_roots_simplify():
    r2 = ExactValue.sqrt(2)
    assert r2 * r2 == ExactValue.rational(2)
    assert ExactValue.sqrt(8) == r2 * 2
    assert ExactValue.sqrt(F(1, 2)) * 2 == r2
    assert (r2 / r2) == ExactValue.rational(1)


def test_zero_detection_is_exact():
    r2 = ExactValue.sqrt(2)
    z = r2 * r2 - 2
    assert z.is_zero and not z
    assert complex(z) == 0


@given(exact_values(), exact_values())
def test_ring_operations_match_floats(a, b):
    for exact, approx in ((a + b, complex(a) + complex(b)), (a - b, complex(a) - complex(b)),
                          (a * b, complex(a) * complex(b))):
        assert abs(complex(exact) - approx) <= 1e-9 * (1 + abs(approx))


@given(exact_values())
def test_abs2_is_real_and_matches(a):
    m = a.abs2()
    assert m == m.conjugate()
    assert math.isclose(complex(m).real, abs(complex(a)) ** 2, rel_tol=1e-9, abs_tol=1e-9)


@given(exact_values(), exact_values())
def test_conjugation_is_multiplicative(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


@given(exact_values())
def test_hash_agrees_with_equality(a):
    b = a + ExactValue() * 3
    assert a == b and hash(a) == hash(b)
