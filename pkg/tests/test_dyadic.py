import os
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from services.dyadic import (
    HALF, ONE, ZERO, Dyadic, Ordering, add, compare, mul, mul_pow2, normalize, pow2, slope_exponent,
)
from services.errors import DyadicError

dyadics = st.builds(Dyadic, st.integers(min_value=-10**12, max_value=10**12), st.integers(min_value=0, max_value=80))


def as_fraction(x):
    return Fraction(x.numerator, 2 ** x.exponent)


def test_normalize_examples():
    assert normalize(2, 2) == Dyadic.parse("1/2")
    assert normalize(0, 7).exponent == 0
    assert str(normalize(3, 3)) == "3/8"


def test_negative_exponent_is_rejected():
    with pytest.raises(DyadicError):
        normalize(1, -1)


def test_add_and_mul_examples():
    assert add(Dyadic.parse("1/2"), Dyadic.parse("1/4")) == Dyadic.parse("3/4")
    assert add(Dyadic.parse("3/8"), Dyadic.parse("5/8")) == ONE
    assert mul(HALF, Dyadic.parse("3/4")) == Dyadic.parse("3/8")
    assert mul_pow2(Dyadic.parse("1/8"), 3) == ONE
    assert mul_pow2(ONE, -3) == Dyadic.parse("1/8")
    assert pow2(-2) == Dyadic.parse("1/4")


def test_compare_examples():
    assert compare(Dyadic.parse("3/8"), HALF) is Ordering.LESS
    assert compare(Dyadic.parse("2/4"), HALF) is Ordering.EQUAL
    assert compare(Dyadic.parse("-1/2"), ZERO) is Ordering.LESS


@pytest.mark.parametrize("text", ["1/3", "0.5", "a", "1/0", "", "1/-2"])
def test_parse_rejects_non_dyadic_text(text):
    with pytest.raises(DyadicError):
        Dyadic.parse(text)


def test_text_form():
    assert str(Dyadic.parse("6/16")) == "3/8"
    assert str(Dyadic(-4, 0)) == "-4"
    assert str(Dyadic(-4, 1)) == "-2"
    assert repr(Dyadic(3, 3)) == "Dyadic('3/8')"


def test_slope_exponent():
    assert slope_exponent(Dyadic.parse("3/8"), Dyadic.parse("3/4")) == 1
    assert slope_exponent(ONE, Dyadic.parse("1/8")) == -3
    assert slope_exponent(ONE, Dyadic(3, 0)) is None


@settings(max_examples=500)
@given(dyadics)
def test_canonical_form(x):
    if x.exponent > 0:
        assert x.numerator % 2 == 1
    if x.numerator == 0:
        assert x.exponent == 0
    assert Dyadic.parse(str(x)) == x


@settings(max_examples=10_000, deadline=None)
@given(dyadics, dyadics)
def test_arithmetic_matches_fractions(x, y):
    assert as_fraction(x + y) == as_fraction(x) + as_fraction(y)
    assert as_fraction(x - y) == as_fraction(x) - as_fraction(y)
    assert as_fraction(x * y) == as_fraction(x) * as_fraction(y)
    assert (x < y) == (as_fraction(x) < as_fraction(y))
    assert (x == y) == (as_fraction(x) == as_fraction(y))


@given(dyadics, dyadics, dyadics)
def test_ring_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x * (y + z) == x * y + x * z
    assert x + ZERO == x
    assert ONE * x == x


@given(dyadics, st.integers(min_value=-60, max_value=60))
def test_mul_pow2_matches_fractions(x, k):
    assert as_fraction(x.mul_pow2(k)) == as_fraction(x) * Fraction(2) ** k


@given(dyadics)
def test_floor_and_hash(x):
    assert x.floor() <= as_fraction(x) < x.floor() + 1
    if x.is_integer():
        assert hash(x) == hash(x.floor())
        assert x == x.floor()
