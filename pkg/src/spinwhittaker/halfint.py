"""Exact half-integer arithmetic.

Gelfand-Tsetlin entries, Harish-Chandra parameters and all exponent data are
integers or half-integers.  Storing the doubled value keeps every comparison
and every interlacing check exact; floats never enter validity logic.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union["HalfInt", int, Fraction]


class HalfInt:
    """An element of (1/2)Z, stored as the doubled integer."""

    __slots__ = ("doubled",)

    def __init__(self, value: Number = 0, *, doubled: int | None = None):
        if doubled is not None:
            self.doubled = int(doubled)
            return
        if isinstance(value, HalfInt):
            self.doubled = value.doubled
        elif isinstance(value, int):
            self.doubled = 2 * value
        elif isinstance(value, Fraction):
            if value.denominator not in (1, 2):
                raise ValueError(f"{value} is not a half-integer")
            self.doubled = int(value * 2)
        else:
            raise TypeError(f"cannot build HalfInt from {value!r}")

    @staticmethod
    def from_doubled(d: int) -> "HalfInt":
        return HalfInt(doubled=d)

    @staticmethod
    def parse(text: str) -> "HalfInt":
        """Parse '3', '-2', '7/2' (halves written with an explicit /2)."""
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            if int(den) != 2:
                raise ValueError(f"{text!r}: only /2 denominators are half-integers")
            return HalfInt(doubled=int(num))
        return HalfInt(int(text))

    # -- queries ----------------------------------------------------------
    @property
    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.doubled, 2)

    def __float__(self) -> float:
        return self.doubled / 2.0

    def __int__(self) -> int:
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer")
        return self.doubled // 2

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _coerce(other: Number) -> "HalfInt":
        if isinstance(other, HalfInt):
            return other
        return HalfInt(other)

    def __add__(self, other: Number) -> "HalfInt":
        return HalfInt(doubled=self.doubled + self._coerce(other).doubled)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "HalfInt":
        return HalfInt(doubled=self.doubled - self._coerce(other).doubled)

    def __rsub__(self, other: Number) -> "HalfInt":
        return HalfInt(doubled=self._coerce(other).doubled - self.doubled)

    def __neg__(self) -> "HalfInt":
        return HalfInt(doubled=-self.doubled)

    def __abs__(self) -> "HalfInt":
        return HalfInt(doubled=abs(self.doubled))

    def __mul__(self, other: int) -> "HalfInt":
        if not isinstance(other, int):
            return NotImplemented
        return HalfInt(doubled=self.doubled * other)

    __rmul__ = __mul__

    # -- comparison ---------------------------------------------------------
    def _cmp_key(self, other: object) -> int:
        if isinstance(other, (HalfInt, int, Fraction)):
            return self._coerce(other).doubled
        return NotImplemented  # type: ignore[return-value]

    def __eq__(self, other: object) -> bool:
        key = self._cmp_key(other)
        if key is NotImplemented:
            return NotImplemented
        return self.doubled == key

    def __lt__(self, other: Number) -> bool:
        return self.doubled < self._coerce(other).doubled

    def __le__(self, other: Number) -> bool:
        return self.doubled <= self._coerce(other).doubled

    def __gt__(self, other: Number) -> bool:
        return self.doubled > self._coerce(other).doubled

    def __ge__(self, other: Number) -> bool:
        return self.doubled >= self._coerce(other).doubled

    def __hash__(self) -> int:
        return hash(Fraction(self.doubled, 2))

    def sign(self) -> int:
        return (self.doubled > 0) - (self.doubled < 0)

    def __repr__(self) -> str:
        if self.is_integer:
            return str(self.doubled // 2)
        return f"{self.doubled}/2"


def half(d: int) -> HalfInt:
    """Shorthand for the half-integer d/2."""
    return HalfInt(doubled=d)


def hvec(*values: Number) -> tuple[HalfInt, ...]:
    return tuple(HalfInt._coerce(v) for v in values)


def uniform_parity(values) -> bool:
    """True when all entries are integers or all are proper half-integers."""
    vals = [HalfInt._coerce(v) for v in values]
    if not vals:
        return True
    p = vals[0].doubled % 2
    return all(v.doubled % 2 == p for v in vals)
