"""Exact rational helpers shared by the graph model and the wire formats.

All exact computation in this package uses :class:`fractions.Fraction`,
which keeps values in reduced canonical form (positive denominator, gcd 1)
and provides exact arithmetic with arbitrarily large numerators and
denominators. These helpers only add the conversions used at the package
boundary.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidInstanceError


def as_rational(value: Fraction | int | str) -> Fraction:
    """Coerce an int, Fraction, or string to an exact Fraction.

    Strings may be decimal ("0.027") or a quotient ("27/1000"); both are
    read exactly. Floats are rejected on purpose: a binary float would
    silently change the value of inputs like 0.1.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidInstanceError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInstanceError(f"not a rational: {value!r}") from exc
    raise InvalidInstanceError(
        f"unsupported rational type: {type(value).__name__}"
    )


def format_rational(value: Fraction) -> str:
    """Canonical wire form: "p" for integers, "p/q" otherwise."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
