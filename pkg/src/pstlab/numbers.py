"""Exact/inexact scalar helpers shared by every module.

Exact values are :class:`fractions.Fraction`; inexact values are ``float``.
Times that are rational multiples of pi are kept exact as :class:`PiMultiple`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[Fraction, float]

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")
_PI_RE = re.compile(
    r"^\s*(?P<num>[+-]?\d+(?:\.\d+)?)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+))?\s*$",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class PiMultiple:
    """The time ``coeff * pi`` with an exact rational coefficient."""

    coeff: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))

    def __float__(self):
        return float(self.coeff) * math.pi

    def __str__(self):
        c = self.coeff
        if c == 1:
            return "pi"
        if c.denominator == 1:
            return f"{c.numerator}*pi"
        if c.numerator == 1:
            return f"pi/{c.denominator}"
        return f"{c.numerator}*pi/{c.denominator}"


PI = PiMultiple(Fraction(1))
Time = Union[PiMultiple, float]


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def to_exact(x) -> Fraction:
    """Convert ints, Fractions and rational strings to Fraction; floats are refused."""
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str) and _RATIONAL_RE.match(x):
        return Fraction(x.replace(" ", ""))
    raise TypeError(f"{x!r} has no exact rational representation")


def parse_scalar(x) -> Scalar:
    """Parse a JSON/CLI value: ints and "p/q" strings are exact, decimals are floats."""
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        s = x.strip()
        if _RATIONAL_RE.match(s):
            return Fraction(s.replace(" ", ""))
        return float(s)
    raise TypeError(f"cannot parse {x!r} as a number")


def parse_time(x) -> Time:
    """Parse a readout time: ``"pi"``, ``"pi/2"``, ``"3pi/4"``, ``"2*pi"`` or a decimal."""
    if isinstance(x, PiMultiple):
        return x
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        t = float(x)
    else:
        s = str(x).strip()
        m = _PI_RE.match(s)
        if m:
            num = m.group("num")
            coeff = Fraction(num) if num is not None else Fraction(1)
            if m.group("den"):
                coeff /= int(m.group("den"))
            t = PiMultiple(coeff)
        else:
            t = float(s)
    if float(t) <= 0:
        raise ValueError(f"time must be positive, got {x!r}")
    return t


def fmt(x) -> str | float:
    """Canonical JSON form: exact values become "p/q" strings, floats stay floats."""
    if isinstance(x, PiMultiple):
        return str(x)
    if isinstance(x, Rational):
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return float(x)


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None when irrational."""
    x = Fraction(x)
    if x < 0:
        return None
    a, b = x.numerator, x.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def sqrt_value(x: Scalar) -> Scalar:
    """Square root, exact when possible."""
    if is_exact(x):
        r = rational_sqrt(Fraction(x))
        if r is not None:
            return r
    return math.sqrt(float(x))


def close(a: Scalar, b: Scalar, tol: float) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(a)), abs(float(b)))


def sum_of_sqrts_equals(q: Fraction, a_sq: Fraction, b_sq: Fraction) -> bool:
    """Exactly decide ``q == sqrt(a_sq) + sqrt(b_sq)`` for rationals."""
    if q < 0 or a_sq < 0 or b_sq < 0:
        return False
    # q - sqrt(b) = sqrt(a)  <=>  q^2 - a - b = 2 sqrt(ab), both sides >= 0
    lhs = q * q - a_sq - b_sq
    if lhs < 0:
        return False
    if lhs * lhs != 4 * a_sq * b_sq:
        return False
    return True
