"""Exact rationals and closed rational intervals.

``Rational`` is :class:`fractions.Fraction`; intervals are outward-exact, so a
quantity enclosed by an operand interval is always enclosed by the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction
Number = Union[int, Fraction]


def parse_rational(text: str) -> Fraction:
    """Parse ``"P/Q"`` or an integer literal; decimals and floats are rejected."""
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}: expected P/Q with integer P, Q") from None
    if d == 0:
        raise ValueError(f"malformed rational {text!r}: zero denominator")
    return Fraction(n, d)


def format_rational(q: Number) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not isinstance(self.lo, Fraction):
            object.__setattr__(self, "lo", Fraction(self.lo))
        if not isinstance(self.hi, Fraction):
            object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, q: Number) -> "RationalInterval":
        q = Fraction(q)
        return cls(q, q)

    @classmethod
    def coerce(cls, v) -> "RationalInterval":
        return v if isinstance(v, RationalInterval) else cls.point(v)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, v) -> bool:
        v = RationalInterval.coerce(v)
        return self.lo <= v.lo and v.hi <= self.hi

    def overlaps(self, other: "RationalInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other):
        other = RationalInterval.coerce(other)
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-RationalInterval.coerce(other))

    def __rsub__(self, other):
        return RationalInterval.coerce(other) - self

    def __mul__(self, other):
        other = RationalInterval.coerce(other)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalInterval.coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        return self * RationalInterval(1 / other.hi, 1 / other.lo)

    def __rtruediv__(self, other):
        return RationalInterval.coerce(other) / self

    def __str__(self):
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"
