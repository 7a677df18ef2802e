"""Scalar helpers shared by the polynomial modules.

Coefficients throughout the package are exact rationals.  A value whose
denominator is 1 is stored as a plain Python int; everything else is a
``fractions.Fraction`` in canonical reduced form (positive denominator,
gcd(|num|, den) = 1, zero is 0/1).  Mixing the two is safe: Python's
numeric tower keeps arithmetic, equality and hashing consistent.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

#: Canonical arbitrary-precision rational scalar.
BigRat = Fraction

Coeff = Union[int, Fraction]


def norm(c: Coeff) -> Coeff:
    """Collapse a Fraction with denominator 1 to a plain int."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def as_coeff(value) -> Coeff:
    """Coerce ints, Fractions and strings like "3/2" to a canonical scalar.

    Floats are rejected: the package is exact by contract.
    """
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, Fraction):
        return norm(value)
    if isinstance(value, str):
        return norm(Fraction(value))
    raise TypeError(f"not an exact rational scalar: {value!r}")


def div(a: Coeff, b: Coeff) -> Coeff:
    """Exact division of scalars."""
    if b == 0:
        raise ZeroDivisionError("scalar division by zero")
    return norm(Fraction(a) / Fraction(b))


def inv(c: Coeff) -> Coeff:
    return div(1, c)


def denominator(c: Coeff) -> int:
    return c.denominator if isinstance(c, Fraction) else 1


def numerator(c: Coeff) -> int:
    return c.numerator if isinstance(c, Fraction) else c
