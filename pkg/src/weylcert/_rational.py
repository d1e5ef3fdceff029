"""Parsing numbers into exact rationals."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

Number = int | float | str | Fraction


def as_fraction(x: Number) -> Fraction:
    """Exact rational value of ``x``.

    Floats convert to their exact binary value, strings accept ``"p/q"``
    and decimal forms.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    try:
        return Fraction(float(x))
    except (TypeError, ValueError) as exc:
        raise TypeError(f"cannot interpret {x!r} as a rational") from exc


def fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
