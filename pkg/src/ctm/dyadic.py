"""Exact non-negative numbers of the form ``numerator / 2**exponent``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering


@total_ordering
@dataclass(frozen=True, eq=False)
class DyadicRational:
    numerator: int
    exponent: int = 0

    def __post_init__(self) -> None:
        num, exp = self.numerator, self.exponent
        if num < 0 or exp < 0:
            raise ValueError("numerator and exponent must be non-negative")
        if num == 0:
            exp = 0
        else:
            shift = min((num & -num).bit_length() - 1, exp)
            num >>= shift
            exp -= shift
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)

    @classmethod
    def from_count(cls, count: int, exponent: int) -> "DyadicRational":
        return cls(count, exponent)

    def _aligned(self, other: "DyadicRational") -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return self.numerator << (e - self.exponent), other.numerator << (e - other.exponent), e

    def __add__(self, other: "DyadicRational") -> "DyadicRational":
        if not isinstance(other, DyadicRational):
            return NotImplemented
        a, b, e = self._aligned(other)
        return DyadicRational(a + b, e)

    __radd__ = __add__

    def __sub__(self, other: "DyadicRational") -> "DyadicRational":
        if not isinstance(other, DyadicRational):
            return NotImplemented
        a, b, e = self._aligned(other)
        if b > a:
            raise ValueError("difference would be negative")
        return DyadicRational(a - b, e)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, DyadicRational):
            return (self.numerator, self.exponent) == (other.numerator, other.exponent)
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        if isinstance(other, DyadicRational):
            a, b, _ = self._aligned(other)
            return a < b
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() < other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.as_fraction())

    def __float__(self) -> float:
        return self.numerator / (1 << self.exponent)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def neg_log2(self) -> float:
        """``-log2`` of the value; exact when the numerator is 1."""
        if self.numerator == 0:
            raise ValueError("log of zero")
        return self.exponent - math.log2(self.numerator)

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"

    @classmethod
    def parse(cls, text: str) -> "DyadicRational":
        num, sep, exp = text.partition("/2^")
        if not sep:
            raise ValueError(f"not a dyadic literal: {text!r}")
        return cls(int(num), int(exp))
