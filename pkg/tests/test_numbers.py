import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pstlab.numbers import (
    PI,
    PiMultiple,
    fmt,
    parse_scalar,
    parse_time,
    rational_sqrt,
    sqrt_value,
    sum_of_sqrts_equals,
    to_exact,
)


@pytest.mark.parametrize("text, coeff", [
    ("pi", F(1)), ("pi/2", F(1, 2)), ("3pi/4", F(3, 4)), ("2*pi", F(2)), (" PI / 3 ", F(1, 3)),
])
def test_parse_time_pi_multiples(text, coeff):
    assert parse_time(text) == PiMultiple(coeff)


def test_parse_time_decimal_and_invalid():
    assert parse_time("1.25") == 1.25
    with pytest.raises(ValueError):
        parse_time("0")
    with pytest.raises(ValueError):
        parse_time("-pi")
    with pytest.raises(ValueError):
        parse_time("soon")


def test_pi_multiple_float_and_str():
    assert float(PiMultiple(F(1, 2))) == math.pi / 2
    assert [str(PiMultiple(c)) for c in (F(1), F(1, 2), F(3, 4), F(2))] == ["pi", "pi/2", "3*pi/4", "2*pi"]
    assert str(PI) == "pi"


def test_parse_scalar():
    assert parse_scalar("3/4") == F(3, 4)
    assert parse_scalar(2) == F(2)
    assert isinstance(parse_scalar("0.75"), float)
    with pytest.raises(TypeError):
        parse_scalar(True)


def test_to_exact_refuses_floats():
    with pytest.raises(TypeError):
        to_exact(0.5)


def test_fmt():
    assert fmt(F(6)) == "6"
    assert fmt(F(-3, 4)) == "-3/4"
    assert fmt(0.5) == 0.5
    assert fmt(PiMultiple(F(1, 2))) == "pi/2"


def test_rational_sqrt():
    assert rational_sqrt(F(9, 4)) == F(3, 2)
    assert rational_sqrt(F(6)) is None
    assert rational_sqrt(F(-1)) is None
    assert sqrt_value(F(6)) == pytest.approx(math.sqrt(6))


@given(st.fractions(min_value=0, max_value=50), st.fractions(min_value=0, max_value=50))
def test_sum_of_sqrts_squares(a, b):
    assert sum_of_sqrts_equals(a + b, a * a, b * b)


def test_sum_of_sqrts_irrational():
    # sqrt(2) + sqrt(8) = 3 sqrt(2) is irrational, so no rational q matches
    assert not sum_of_sqrts_equals(F(4), F(2), F(8))
    assert not sum_of_sqrts_equals(F(3), F(1), F(1))
