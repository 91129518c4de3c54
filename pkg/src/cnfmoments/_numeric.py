"""Small exact-arithmetic helpers shared by the bound and oracle modules."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[int, Fraction, float]


def as_fraction(value: Number) -> Fraction:
    """Convert ``value`` to a Fraction without losing precision.

    Floats are converted exactly (binary expansion), strings go through
    Fraction's own parser so "23/12" and "0.5" both work.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def strict_floor(a: Number) -> int:
    """Largest integer strictly smaller than ``a``.

    >>> strict_floor(Fraction(23, 12)), strict_floor(2), strict_floor(1)
    (1, 1, 0)
    """
    q = as_fraction(a)
    fl = q.numerator // q.denominator
    return fl - 1 if q.denominator == 1 else fl


def strict_floor_sqrt(t: Number) -> int:
    """Largest integer ``k`` with ``k*k < t`` (strict floor of sqrt(t)), t >= 0."""
    q = as_fraction(t)
    if q < 0:
        raise ValueError("negative argument")
    if q == 0:
        return -1
    # ceil(sqrt(t)) - 1 works for exact squares and non-squares alike
    k = math.isqrt(q.numerator // q.denominator)
    while (k + 1) * (k + 1) < q:
        k += 1
    while k * k >= q:
        k -= 1
    return k


def clamp_unit(value):
    """Clamp to [0, 1]; returns ``(clamped, was_clamped)``."""
    if value < 0:
        return type(value)(0), True
    if value > 1:
        return type(value)(1), True
    return value, False


def ceil_decimal(value: Number, digits: int = 6) -> str:
    """Decimal string of ``value`` rounded *up* at ``digits`` places.

    Used for displaying upper bounds so the printed number is never
    smaller than the exact one.
    """
    q = as_fraction(value)
    scale = 10**digits
    scaled = -((-q.numerator * scale) // q.denominator)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), scale)
    return f"{sign}{whole}.{frac:0{digits}d}"


def fraction_str(value: Number) -> str:
    q = as_fraction(value)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
