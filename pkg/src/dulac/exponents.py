"""Complex exponents as exact rational coordinate vectors over a declared basis.

A basis is a finite list of complex numbers that the user promises to be
linearly independent over the rationals.  Exponents never store floating
point: each one is a vector of exact rational coordinates, and real or
imaginary parts are only ever produced as interval enclosures whose radius
shrinks as the working precision grows.

Basis entries come in two flavors, distinguished by their literal form:

* exact: integer, fraction or exact complex literals such as "1", "-3/2",
  "1+1i".  Their enclosures have radius zero and comparisons terminate.
* approximate: literals containing a decimal point, such as
  "1.41421356237309504880".  The literal fixes the value to half a unit in
  its last decimal place; raising the working precision tightens the
  enclosure only down to that floor.

Ordering convention: exponents are compared by real part first and ties are
broken by imaginary part, ascending.  The imaginary tie-break is a library
convention chosen to make the order total; any fixed tie rule would do.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import BasisMismatch, ExactValueRequired, UndecidableComparison
from .scalars import ExactScalar

DEFAULT_PRECISION = 128
MAX_PRECISION = 1024

# one entry part: rational "a" / "a/b" or decimal "a.b"
_EPART = r"[+-]?\d+(?:\.\d+|/\d+)?"
_ENTRY_RE = _re.compile(rf"^(?P<re>{_EPART})?(?:(?P<im>{_EPART})i)?$")


def _parse_part(text: str) -> tuple[Fraction, Fraction]:
    """Return (value, resolution floor) for one literal part."""
    if "." in text:
        digits = len(text.split(".", 1)[1])
        return Fraction(text), Fraction(1, 2 * 10**digits)
    return Fraction(text), Fraction(0)


@dataclass(frozen=True)
class BasisEntry:
    """One basis element with its enclosure data."""

    literal: str
    re: Fraction
    im: Fraction
    re_floor: Fraction  # resolution floor of the literal, 0 when exact
    im_floor: Fraction

    @property
    def exact(self) -> bool:
        return self.re_floor == 0 and self.im_floor == 0

    @property
    def scale(self) -> Fraction:
        return max(abs(self.re), abs(self.im), Fraction(1))

    @staticmethod
    def parse(text: str) -> "BasisEntry":
        m = _ENTRY_RE.match(text.strip())
        if m is None or (m.group("re") is None and m.group("im") is None):
            raise ValueError(f"basis entry parse: malformed literal {text!r}")
        re_v, re_f = _parse_part(m.group("re")) if m.group("re") else (Fraction(0), Fraction(0))
        im_v, im_f = _parse_part(m.group("im")) if m.group("im") else (Fraction(0), Fraction(0))
        return BasisEntry(text.strip(), re_v, im_v, re_f, im_f)

    def radius(self, part: str, precision: int) -> Fraction:
        """Enclosure radius of the chosen part at the given precision."""
        floor = self.re_floor if part == "re" else self.im_floor
        if floor == 0:
            return Fraction(0)
        return max(self.scale * Fraction(1, 2**precision), floor)


class ExponentBasis:
    """A declared list of rationally independent complex numbers.

    The independence promise is the user's; the library cannot verify it and
    reports a broken promise through UndecidableComparison when two distinct
    coordinate vectors evaluate to provably equal numbers.
    """

    def __init__(self, entries: Sequence[str], precision: int = DEFAULT_PRECISION):
        parsed = tuple(BasisEntry.parse(e) if isinstance(e, str) else e for e in entries)
        if not parsed:
            raise ValueError("ExponentBasis: at least one entry is required")
        seen = {}
        for e in parsed:
            key = (e.re, e.im)
            if key in seen:
                raise ValueError(
                    f"ExponentBasis: entries {seen[key]!r} and {e.literal!r} have equal value"
                )
            seen[key] = e.literal
        if precision < 16:
            raise ValueError(f"ExponentBasis: precision {precision} is too small")
        self.entries = parsed
        self.precision = min(precision, MAX_PRECISION)
        self._one_index = next(
            (i for i, e in enumerate(parsed) if e.exact and e.re == 1 and e.im == 0), None
        )

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExponentBasis)
            and self.entries == other.entries
            and self.precision == other.precision
        )

    def __hash__(self) -> int:
        return hash((self.entries, self.precision))

    def __repr__(self) -> str:
        lits = ", ".join(e.literal for e in self.entries)
        return f"ExponentBasis([{lits}], precision={self.precision})"

    # -- construction of exponents ------------------------------------

    def exponent(self, coords: Sequence) -> "Exponent":
        cs = tuple(Fraction(c) for c in coords)
        if len(cs) != self.dim:
            raise ValueError(
                f"exponent: expected {self.dim} coordinates, got {len(cs)}"
            )
        return Exponent(self, cs)

    def zero(self) -> "Exponent":
        return Exponent(self, (Fraction(0),) * self.dim)

    def rational(self, value) -> "Exponent":
        """Embed a rational number, provided the basis contains the entry 1."""
        if self._one_index is None:
            raise BasisMismatch(
                "rational embedding: basis has no entry equal to 1, "
                f"cannot represent {value} as an exponent"
            )
        coords = [Fraction(0)] * self.dim
        coords[self._one_index] = Fraction(value)
        return Exponent(self, tuple(coords))

    def parse_exponent(self, coords: Sequence[str]) -> "Exponent":
        return self.exponent([Fraction(c) for c in coords])


@dataclass(frozen=True)
class Exponent:
    """Exact rational coordinate vector over an ExponentBasis."""

    basis: ExponentBasis
    coords: tuple

    # -- linear arithmetic --------------------------------------------

    def _check(self, other: "Exponent") -> None:
        if self.basis != other.basis:
            raise BasisMismatch(
                f"exponent arithmetic: bases differ ({self.basis!r} vs {other.basis!r})"
            )

    def __add__(self, other: "Exponent") -> "Exponent":
        self._check(other)
        return Exponent(self.basis, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Exponent") -> "Exponent":
        self._check(other)
        return Exponent(self.basis, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Exponent":
        return Exponent(self.basis, tuple(-a for a in self.coords))

    def __mul__(self, k) -> "Exponent":
        q = Fraction(k)
        return Exponent(self.basis, tuple(a * q for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    # -- enclosures ----------------------------------------------------

    def _mid(self, part: str) -> Fraction:
        vals = [getattr(e, part) for e in self.basis.entries]
        return sum((c * v for c, v in zip(self.coords, vals)), Fraction(0))

    @property
    def re_mid(self) -> Fraction:
        """Midpoint of the real-part enclosure (exact for exact bases)."""
        return self._mid("re")

    @property
    def im_mid(self) -> Fraction:
        return self._mid("im")

    def radius(self, part: str, precision: int) -> Fraction:
        return sum(
            (abs(c) * e.radius(part, precision) for c, e in zip(self.coords, self.basis.entries)),
            Fraction(0),
        )

    def re_interval(self, precision: Optional[int] = None) -> tuple[Fraction, Fraction]:
        p = precision or self.basis.precision
        m, r = self.re_mid, self.radius("re", p)
        return (m - r, m + r)

    def im_interval(self, precision: Optional[int] = None) -> tuple[Fraction, Fraction]:
        p = precision or self.basis.precision
        m, r = self.im_mid, self.radius("im", p)
        return (m - r, m + r)

    def value(self) -> ExactScalar:
        """Exact complex value; requires every participating entry exact."""
        for c, e in zip(self.coords, self.basis.entries):
            if c != 0 and not e.exact:
                raise ExactValueRequired(
                    f"exponent value: basis entry {e.literal!r} is approximate; "
                    "an exact complex value cannot be produced"
                )
        return ExactScalar(self.re_mid, self.im_mid)

    # -- ordering -------------------------------------------------------

    def _part_sign(self, part: str) -> int:
        """Certified sign of Re or Im of this exponent; 0 only when exact."""
        mid = self._mid(part)
        prec = self.basis.precision
        while True:
            rad = self.radius(part, prec)
            if mid - rad > 0:
                return 1
            if mid + rad < 0:
                return -1
            if rad == 0:
                return 0
            nxt = min(prec * 2, MAX_PRECISION)
            if nxt == prec or self.radius(part, nxt) == rad:
                raise UndecidableComparison(
                    f"sign of {part}{self} undecidable at precision "
                    f"{prec}: enclosure radius {float(rad):.3e} does not shrink"
                )
            prec = nxt

    def re_sign(self) -> int:
        return self._part_sign("re")

    def im_sign(self) -> int:
        return self._part_sign("im")

    def re_below(self, bound) -> bool:
        """Certified test Re(self) < bound for a rational (or +inf) bound."""
        if bound == float("inf"):
            return True
        if bound == float("-inf"):
            return False
        shifted = _ShiftedRe(self, Fraction(bound))
        s = shifted.sign()
        return s < 0

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def serialize(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coords]

    # rich comparisons delegate to exp_compare
    def __lt__(self, other):
        return exp_compare(self, other) < 0

    def __le__(self, other):
        return exp_compare(self, other) <= 0

    def __gt__(self, other):
        return exp_compare(self, other) > 0

    def __ge__(self, other):
        return exp_compare(self, other) >= 0


class _ShiftedRe:
    """Helper: certified sign of Re(exponent) - bound with escalation."""

    def __init__(self, exp: Exponent, bound: Fraction):
        self.exp = exp
        self.bound = bound

    def sign(self) -> int:
        mid = self.exp.re_mid - self.bound
        prec = self.exp.basis.precision
        while True:
            rad = self.exp.radius("re", prec)
            if mid - rad > 0:
                return 1
            if mid + rad < 0:
                return -1
            if rad == 0:
                return -1 if mid < 0 else (1 if mid > 0 else 0)
            nxt = min(prec * 2, MAX_PRECISION)
            if nxt == prec or self.exp.radius("re", nxt) == rad:
                raise UndecidableComparison(
                    f"comparison of Re{self.exp} against {self.bound} undecidable "
                    f"at precision {prec}"
                )
            prec = nxt


def exp_compare(a: Exponent, b: Exponent) -> int:
    """Total order: -1, 0, +1 with real parts first, imaginary tie-break.

    Returns 0 exactly when the coordinate vectors agree.  When enclosures
    overlap without coordinate equality the working precision is doubled up
    to the configured maximum; persistent overlap raises
    UndecidableComparison, which signals basis entries too close to separate
    or a broken independence promise.
    """
    if a.basis != b.basis:
        raise BasisMismatch("exp_compare: operands use different bases")
    if a.coords == b.coords:
        return 0
    d = a - b
    s = d.re_sign()
    if s != 0:
        return s
    s = d.im_sign()
    if s != 0:
        return s
    raise UndecidableComparison(
        f"exp_compare: coordinates {a} and {b} differ but the "
        "values are provably equal; the basis independence promise is broken"
    )


def re_compare(a: Exponent, b: Exponent) -> int:
    """Certified sign of Re(a - b); 0 only when exactly equal."""
    if a.basis != b.basis:
        raise BasisMismatch("re_compare: operands use different bases")
    if a.coords == b.coords:
        return 0
    return (a - b).re_sign()
