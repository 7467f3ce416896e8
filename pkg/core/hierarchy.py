# core/hierarchy.py
"""
Shared vocabulary for the hierarchy level m and for exact/float rendering.

The level m is either a positive integer or the distinguished INFINITY value,
which stands for the free end of the hierarchy.
"""

from enum import Enum
from fractions import Fraction
from typing import Union

from .errors import ConfigError


class Infinity(Enum):
    """The free end of the hierarchy (m = infinity)."""
    INFINITY = "inf"

    def __str__(self) -> str:
        return "inf"

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = Infinity.INFINITY

Depth = Union[int, Infinity]

Rational = Union[int, Fraction]


def parse_depth(value) -> Depth:
    """
    Parse a hierarchy level from user input.

    Args:
        value: An int, the INFINITY member, or a string such as "2", "inf", "oo"

    Returns:
        A positive int or INFINITY
    """
    if value is INFINITY:
        return INFINITY
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "oo", "free"):
            return INFINITY
        try:
            value = int(text)
        except ValueError:
            raise ConfigError(f"invalid hierarchy level: {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"hierarchy level must be a positive integer or 'inf', got {value!r}")
    return value


def reaches(depth: int, m: Depth) -> bool:
    """True iff a block of the given depth is constrained at level m (depth >= m)."""
    if m is INFINITY:
        return False
    return depth >= m


def lower_level(m: Depth) -> Depth:
    """m - 1, with infinity absorbing; level 0 behaves like level 1."""
    if m is INFINITY:
        return INFINITY
    return max(m - 1, 1)


def depth_label(m: Depth) -> str:
    return "inf" if m is INFINITY else str(m)


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, sympy Rationals and 'p/q' strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    # sympy Rational and friends expose p/q
    numerator = getattr(value, "p", None)
    denominator = getattr(value, "q", None)
    if numerator is not None and denominator is not None:
        return Fraction(int(numerator), int(denominator))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def format_fraction(value) -> str:
    """Render an exact rational as 'num/den' (denominator always present)."""
    value = to_fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_float(value: float, digits: int = 17) -> str:
    """Render a float with the given number of significant digits."""
    return f"{float(value):.{digits}g}"
