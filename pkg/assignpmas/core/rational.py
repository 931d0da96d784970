"""Exact rationals: the only numeric type used by the game math."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Union

# Fraction keeps numerator/denominator in lowest terms with a positive denominator.
Rational = Fraction
Payoff = tuple[Fraction, ...]
RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)(/\d+)?$")

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value: RationalLike) -> Fraction:
    """Convert ints, Fractions and exact strings ("3", "0.5", "-7/4") to a Fraction.

    Floats are rejected: a binary float rarely means what the user typed.
    """

    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    token = text.strip()
    if not _RATIONAL_RE.match(token):
        raise ValueError(f"not an exact rational: {text!r}")
    if "/" in token and "." in token:
        raise ValueError(f"decimal numerator with a denominator is not allowed: {text!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError as exc:
        raise ValueError(f"zero denominator: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Canonical "p/q" string, or the bare integer when q = 1."""

    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_vector(values: Iterable[Fraction], sep: str = ",") -> str:
    return sep.join(format_rational(v) for v in values)


def as_payoff(values: Iterable[RationalLike]) -> Payoff:
    return tuple(as_rational(v) for v in values)
