"""Exact rationals and Weil heights over Q.

Points are plain :class:`fractions.Fraction` values, which are always stored
reduced with a positive denominator.  The point at infinity is the
``INFINITY`` sentinel; every orbit operation rejects it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction

__all__ = [
    "INFINITY",
    "HeightValue",
    "RationalPoint",
    "as_point",
    "format_point",
    "height_exceeds_threshold",
    "log_int",
    "multiplicative_height",
    "multiplicative_height_leq",
    "parse_big_int",
    "weil_height",
]

RationalPoint = Fraction

_LOG2 = math.log(2.0)


class _PointAtInfinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _PointAtInfinity()


@dataclass(frozen=True)
class HeightValue:
    log_height: float
    exact_max: int


def as_point(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a finite point."""
    if value is INFINITY:
        raise ValueError("the point at infinity is not a valid orbit point")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if text.lower() in ("inf", "infinity", "oo"):
            raise ValueError("the point at infinity is not a valid orbit point")
        if "/" in text:
            num, den = text.split("/", 1)
            if int(den) == 0:
                raise ValueError("the point at infinity is not a valid orbit point")
            return Fraction(int(num), int(den))
        return Fraction(parse_big_int(text))
    raise TypeError(f"cannot interpret {value!r} as a rational point")


def format_point(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_big_int(text: str | int) -> int:
    """Parse a decimal integer, accepting exact scientific shorthand like ``1e26``."""
    if isinstance(text, int):
        return text
    try:
        d = Decimal(text.strip())
    except InvalidOperation:
        raise ValueError(f"not an integer: {text!r}") from None
    if not d.is_finite() or d != d.to_integral_value():
        raise ValueError(f"not an integer: {text!r}")
    return int(d)


def log_int(n: int) -> float:
    """Natural log of a positive big integer via bit length plus mantissa."""
    if n <= 0:
        raise ValueError("log of a nonpositive integer")
    shift = n.bit_length() - 60
    if shift <= 0:
        return math.log(n)
    return math.log(n >> shift) + shift * _LOG2


def _check_finite(q) -> Fraction:
    if q is INFINITY:
        raise ValueError("height of the point at infinity is not supported here")
    return as_point(q)


def multiplicative_height(q) -> int:
    q = _check_finite(q)
    return max(abs(q.numerator), q.denominator)


def weil_height(q) -> HeightValue:
    m = multiplicative_height(q)
    return HeightValue(log_height=log_int(m), exact_max=m)


def multiplicative_height_leq(q, bound: int) -> bool:
    if bound < 1:
        raise ValueError("height bound must be at least 1")
    return multiplicative_height(q) <= bound


def height_exceeds_threshold(q) -> bool:
    """``H(q) > 4``, the base-point hypothesis for constant-one orbits."""
    return multiplicative_height(q) > 4
