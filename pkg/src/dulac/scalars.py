"""Exact complex scalars with rational real and imaginary parts."""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction, str]

# one rational part: "3", "-3", "3/4", "-3/4"
_PART = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = _re.compile(rf"^(?P<re>{_PART})?(?:(?P<im>{_PART})i)?$")


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not a rational value: {x!r}")


@dataclass(frozen=True)
class ExactScalar:
    """A complex number a + b*i with exact rational a, b.

    Immutable; all arithmetic is exact.  Division by zero raises
    ZeroDivisionError like the underlying Fraction arithmetic.
    """

    re: Fraction
    im: Fraction

    def __post_init__(self):
        if not isinstance(self.re, Fraction) or not isinstance(self.im, Fraction):
            object.__setattr__(self, "re", _as_fraction(self.re))
            object.__setattr__(self, "im", _as_fraction(self.im))

    # -- construction ------------------------------------------------

    @staticmethod
    def of(re: RationalLike, im: RationalLike = 0) -> "ExactScalar":
        return ExactScalar(_as_fraction(re), _as_fraction(im))

    @staticmethod
    def parse(text: str) -> "ExactScalar":
        """Parse the canonical forms "a/b", "a", "a/b+c/di", "a/b-c/di", "c/di".

        No whitespace, lowercase i, decimal points rejected: scalars are exact.
        """
        if not isinstance(text, str):
            raise ValueError(f"scalar parse: expected string, got {text!r}")
        m = _SCALAR_RE.match(text.strip())
        if m is None or (m.group("re") is None and m.group("im") is None):
            raise ValueError(f"scalar parse: malformed scalar literal {text!r}")
        re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
        im_part = Fraction(m.group("im")) if m.group("im") else Fraction(0)
        return ExactScalar(re_part, im_part)

    # -- arithmetic --------------------------------------------------

    def __add__(self, other: "ExactScalar") -> "ExactScalar":
        return ExactScalar(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ExactScalar") -> "ExactScalar":
        return ExactScalar(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.re, -self.im)

    def __mul__(self, other) -> "ExactScalar":
        if isinstance(other, ExactScalar):
            return ExactScalar(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExactScalar":
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self.re / other, self.im / other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero ExactScalar")
        return ExactScalar(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    def abs_squared(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- formatting --------------------------------------------------

    def __str__(self) -> str:
        s = f"{self.re.numerator}/{self.re.denominator}"
        if self.im != 0:
            sign = "+" if self.im > 0 else "-"
            mag = abs(self.im)
            s += f"{sign}{mag.numerator}/{mag.denominator}i"
        return s

    def __repr__(self) -> str:
        return f"ExactScalar({self})"


ZERO = ExactScalar.of(0)
ONE = ExactScalar.of(1)
I = ExactScalar.of(0, 1)
