"""Formal Dulac series: finite sums of c(t) * x^lambda below an exactness cutoff.

A series value is a sorted list of terms (lambda, c) with complex exponents
lambda (exact coordinate vectors over a shared basis) and nonzero polynomial
coefficients c in t = log x, together with a cutoff: the series is exactly
known for all exponents with Re lambda < cutoff and unknown beyond.  Ring
operations propagate cutoffs so that no claimed term is ever contaminated by
unknown tail data:

* sum: cutoff = min of the operand cutoffs;
* product of nonzero f, g: cutoff = min(cutoff_f + val g, cutoff_g + val f);
* the Euler derivation delta = x d/dx maps c(t) x^l to (l c + c') x^l and
  keeps the cutoff.

Terms at or beyond the cutoff are dropped on construction; truncation can
only lower a cutoff, never raise it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from .errors import BasisMismatch, CutoffIncrease
from .exponents import Exponent, ExponentBasis, exp_compare
from .scalars import ExactScalar
from .tpoly import TPoly

INF = float("inf")


def _as_cutoff(c):
    if c == INF:
        return INF
    if isinstance(c, float):
        return Fraction(repr(c))
    return Fraction(c)


def _canonical(terms, cutoff):
    """Sort, merge duplicate exponents, drop zeros and out-of-cutoff terms."""
    items = sorted(terms, key=cmp_to_key(lambda a, b: exp_compare(a[0], b[0])))
    out = []
    for e, c in items:
        if out and out[-1][0].coords == e.coords:
            out[-1] = (e, out[-1][1] + c)
        else:
            out.append((e, c))
    kept = []
    for e, c in out:
        if c.is_zero():
            continue
        if cutoff != INF and not e.re_below(cutoff):
            continue
        kept.append((e, c))
    return tuple(kept)


@dataclass(frozen=True)
class DulacSeries:
    basis: ExponentBasis
    terms: tuple
    cutoff: object  # Fraction or +inf

    def __post_init__(self):
        object.__setattr__(self, "cutoff", _as_cutoff(self.cutoff))
        object.__setattr__(self, "terms", _canonical(self.terms, self.cutoff))

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(basis: ExponentBasis, cutoff=INF) -> "DulacSeries":
        return DulacSeries(basis, (), cutoff)

    @staticmethod
    def monomial(exponent: Exponent, coeff: TPoly, cutoff=INF) -> "DulacSeries":
        return DulacSeries(exponent.basis, ((exponent, coeff),), cutoff)

    @staticmethod
    def x_power(basis: ExponentBasis, p, cutoff=INF) -> "DulacSeries":
        """The monomial x^p for rational p; requires 1 among the basis entries."""
        return DulacSeries.monomial(basis.rational(p), TPoly.ONE, cutoff)

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def leading(self):
        if not self.terms:
            return None
        return self.terms[0]

    def val(self):
        """Re of the least exponent; +inf for the zero series.

        For approximate bases this is the enclosure midpoint, which is exact
        whenever every participating basis entry is exact.
        """
        if not self.terms:
            return INF
        return self.terms[0][0].re_mid

    def _check(self, other: "DulacSeries") -> None:
        if self.basis != other.basis:
            raise BasisMismatch("series arithmetic: operands use different bases")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "DulacSeries") -> "DulacSeries":
        self._check(other)
        return DulacSeries(self.basis, self.terms + other.terms, min(self.cutoff, other.cutoff))

    def __sub__(self, other: "DulacSeries") -> "DulacSeries":
        return self + (-other)

    def __neg__(self) -> "DulacSeries":
        return DulacSeries(self.basis, tuple((e, -c) for e, c in self.terms), self.cutoff)

    def __mul__(self, other) -> "DulacSeries":
        if isinstance(other, (TPoly, ExactScalar, int, Fraction)):
            k = other if isinstance(other, TPoly) else TPoly.const(
                other if isinstance(other, ExactScalar) else ExactScalar.of(other)
            )
            return DulacSeries(self.basis, tuple((e, c * k) for e, c in self.terms), self.cutoff)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return DulacSeries(self.basis, (), min(self.cutoff, other.cutoff))
        cutoff = min(self.cutoff + other.val(), other.cutoff + self.val())
        prods = []
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                prods.append((e1 + e2, c1 * c2))
        return DulacSeries(self.basis, tuple(prods), cutoff)

    __rmul__ = __mul__

    def delta(self) -> "DulacSeries":
        """Euler derivation x d/dx, acting termwise as (lambda + d/dt)."""
        out = []
        for e, c in self.terms:
            out.append((e, c.shift_apply(e.value())))
        return DulacSeries(self.basis, tuple(out), self.cutoff)

    def shift(self, exponent: Exponent) -> "DulacSeries":
        """Multiply by x^exponent: shifts every term and the cutoff."""
        cutoff = self.cutoff if self.cutoff == INF else self.cutoff + exponent.re_mid
        return DulacSeries(
            self.basis, tuple((e + exponent, c) for e, c in self.terms), cutoff
        )

    def truncate(self, new_cutoff) -> "DulacSeries":
        new_cutoff = _as_cutoff(new_cutoff)
        if new_cutoff > self.cutoff:
            raise CutoffIncrease(
                f"truncate: cannot raise cutoff from {self.cutoff} to {new_cutoff}; "
                "terms beyond the original cutoff were never computed"
            )
        return DulacSeries(self.basis, self.terms, new_cutoff)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "cutoff": None if self.cutoff == INF else float(self.cutoff),
            "terms": [
                {"exp": e.serialize(), "poly": c.serialize()} for e, c in self.terms
            ],
        }

    @staticmethod
    def from_json(data: dict, basis: ExponentBasis) -> "DulacSeries":
        cutoff = INF if data.get("cutoff") is None else _as_cutoff(data["cutoff"])
        terms = []
        for item in data.get("terms", []):
            e = basis.parse_exponent(item["exp"])
            c = TPoly.parse(item["poly"])
            terms.append((e, c))
        return DulacSeries(basis, tuple(terms), cutoff)

    def __str__(self) -> str:
        if not self.terms:
            return f"0 (cutoff {self.cutoff})"
        parts = [f"[{c}]*x^{e}" for e, c in self.terms]
        return " + ".join(parts) + f"  (cutoff {self.cutoff})"
