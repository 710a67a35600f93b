"""Small helpers for exact rationals crossing text boundaries."""

from fractions import Fraction
from numbers import Rational


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are rejected: every quantity in this package is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def fmt(value) -> str:
    """Render a rational as "p/q" (always with a denominator)."""
    value = as_fraction(value)
    return f"{value.numerator}/{value.denominator}"
