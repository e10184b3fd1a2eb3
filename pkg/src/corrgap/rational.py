"""Exact rational parsing and formatting shared by every module."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

RationalLike = Union[Fraction, int, str]


def to_fraction(value: RationalLike) -> Fraction:
    """Convert ``value`` to a Fraction without ever passing through a float.

    Accepts Fractions, ints, strings such as ``"3/4"``, ``"-2"`` or ``"0.125"``.
    A float is accepted only through its shortest decimal repr, so ``0.1``
    becomes ``1/10`` rather than the binary approximation.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def fractions(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(to_fraction(v) for v in values)


def fmt(q: Fraction) -> str:
    """Render as ``"p/q"`` (or ``"p"`` for integers)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_list(text: str) -> tuple[Fraction, ...]:
    """Parse a comma separated list like ``"1/2,1/4,0.25"``."""
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty list")
    return fractions(parts)


def ratio(num: Fraction, den: Fraction) -> Fraction:
    """num/den with the 0/0 = 1 convention used for every gap ratio."""
    if den == 0:
        if num == 0:
            return Fraction(1)
        raise ZeroDivisionError(f"ratio {num}/0 is undefined")
    return Fraction(num) / Fraction(den)
