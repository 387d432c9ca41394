"""Exact rational literal handling."""

import math
from decimal import Decimal
from fractions import Fraction
from numbers import Rational
from typing import Union

from payback.exceptions import InvalidEventError

RationalLike = Union[Fraction, int, str, Decimal, float]


def to_rational(value: RationalLike) -> Fraction:
    """Convert a literal to an exact Fraction.

    Accepts integers, Fractions, Decimals, strings in ``p/q`` or decimal
    notation (``"0.1"`` becomes 1/10 exactly) and floats, which are read
    through their shortest repr so that ``0.1`` also becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidEventError(f"not a rational literal: {value!r}")
    if isinstance(value, (int, Rational, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        value = repr(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidEventError(f"not a rational literal: {value!r}") from e
    raise InvalidEventError(f"not a rational literal: {value!r}")


def format_rational(value: Fraction) -> str:
    """Render a Fraction as ``p/q`` (or ``p`` when integral)."""
    return str(value)


def draw_rational(rng, low: Fraction, high: Fraction, max_denominator: int, open_low: bool = False) -> Fraction:
    """Draw a rational in [low, high] (or (low, high]) with a bounded denominator."""
    den = rng.randint(1, max_denominator)
    lo_num = math.ceil(low * den)
    if open_low and Fraction(lo_num, den) == low:
        lo_num += 1
    hi_num = math.floor(high * den)
    if hi_num < lo_num:
        # no multiple of 1/den in range; the upper bound always is
        return high
    return Fraction(rng.randint(lo_num, hi_num), den)
