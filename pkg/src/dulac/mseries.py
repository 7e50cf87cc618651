"""Multivariate image of solution tails and the weighted norms used to bound them.

Writing every exponent gap as <m, r> over validated generators turns a tail
sum(C_m(t) x^{<m,r>}) into a series in kappa formal variables indexed by
m in Z^kappa_+ \\ {0}.  The Euler derivation transports to

    hat_delta: C_m  |->  (<m, r> + d/dt) C_m,

and the graded norms

    ||g||_j = sum_m (|lambda_base + <m,r>| + Kcal |m|)^j / |Gamma(<m,r>/s)| * ||C_m||_R

measure tails in the scale of spaces used to run the contraction argument.
check_lemma5/check_lemma6/majorant_bound evaluate both sides of the
corresponding operator estimates on concrete data; they are finite-data
consequences of the triangle inequality and norm submultiplicativity, so a
failed check indicates an implementation bug rather than bad input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import (
    BasisMismatch,
    CutoffIncrease,
    ExponentOutsideSemigroup,
    PreconditionViolated,
)
from .exponents import Exponent
from .gammafn import gamma_abs
from .numeric import FLOAT_PRECISION, abs_scalar, to_mpf
from .scalars import ExactScalar
from .semigroup import Generators, decompose
from .series import INF, DulacSeries
from .tpoly import TPoly, poly_norm

# slack absorbing directed rounding in 128-bit float sums; far below any
# genuine estimate violation, far above accumulated arithmetic error
_ROUNDING_SLACK = 1e-25


@dataclass(frozen=True)
class NormParams:
    """Parameters of the graded norm: weight R, order s, degree constant
    Kcal, and the level j."""

    R: Fraction
    s: Fraction
    Kcal: Fraction
    j: int = 0
    tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "R", Fraction(self.R))
        object.__setattr__(self, "s", Fraction(self.s))
        object.__setattr__(self, "Kcal", Fraction(self.Kcal))
        if self.R <= 1:
            raise ValueError(f"NormParams: R must exceed 1, got {self.R}")
        if self.s <= 0:
            raise ValueError(f"NormParams: s must be positive and finite, got {self.s}")
        if self.Kcal < 0:
            raise ValueError(f"NormParams: Kcal must be nonnegative, got {self.Kcal}")
        if self.j < 0:
            raise ValueError(f"NormParams: level j must be nonnegative, got {self.j}")


def _canonical_terms(terms, gens: Generators, cutoff):
    items = {}
    for m, c in terms:
        m = tuple(int(v) for v in m)
        if any(v < 0 for v in m):
            raise ValueError(f"MSeries: negative multi-index {m}")
        if not any(m):
            raise ValueError("MSeries: the zero multi-index is not a semigroup member")
        items[m] = items[m] + c if m in items else c
    out = []
    for m in sorted(items, key=lambda m: (gens.m_re(m), m)):
        c = items[m]
        if c.is_zero():
            continue
        if cutoff != INF and not gens.m_re(m) < cutoff:
            continue
        out.append((m, c))
    return tuple(out)


@dataclass(frozen=True)
class MSeries:
    """Finite multivariate series sum C_m(t) X^m below a cutoff on Re<m,r>."""

    gens: Generators
    lambda_base: Exponent
    terms: tuple
    cutoff: object

    def __post_init__(self):
        cut = self.cutoff if self.cutoff == INF else Fraction(self.cutoff)
        object.__setattr__(self, "cutoff", cut)
        object.__setattr__(self, "terms", _canonical_terms(self.terms, self.gens, cut))

    # -- helpers -------------------------------------------------------------

    def _check(self, other: "MSeries") -> None:
        if self.gens != other.gens:
            raise BasisMismatch("mseries arithmetic: operands use different generators")

    def is_zero(self) -> bool:
        return not self.terms

    def val_re(self):
        return self.gens.m_re(self.terms[0][0]) if self.terms else INF

    def m_value(self, m) -> ExactScalar:
        return self.gens.m_exponent(m).value()

    # -- ring operations -------------------------------------------------------

    def __add__(self, other: "MSeries") -> "MSeries":
        self._check(other)
        return MSeries(
            self.gens, self.lambda_base, self.terms + other.terms, min(self.cutoff, other.cutoff)
        )

    def __neg__(self) -> "MSeries":
        return MSeries(self.gens, self.lambda_base, tuple((m, -c) for m, c in self.terms), self.cutoff)

    def __sub__(self, other: "MSeries") -> "MSeries":
        return self + (-other)

    def __mul__(self, other: "MSeries") -> "MSeries":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return MSeries(self.gens, self.lambda_base, (), min(self.cutoff, other.cutoff))
        cutoff = min(self.cutoff + other.val_re(), other.cutoff + self.val_re())
        prods = []
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                prods.append((tuple(a + b for a, b in zip(m1, m2)), c1 * c2))
        return MSeries(self.gens, self.lambda_base, tuple(prods), cutoff)

    def mul_poly(self, a: TPoly) -> "MSeries":
        return MSeries(self.gens, self.lambda_base, tuple((m, c * a) for m, c in self.terms), self.cutoff)

    def shift_m(self, l) -> "MSeries":
        l = tuple(int(v) for v in l)
        cutoff = self.cutoff if self.cutoff == INF else self.cutoff + self.gens.m_re(l)
        return MSeries(
            self.gens,
            self.lambda_base,
            tuple((tuple(a + b for a, b in zip(m, l)), c) for m, c in self.terms),
            cutoff,
        )

    def hat_delta(self) -> "MSeries":
        """Transported Euler derivation: C_m -> (<m,r> + d/dt) C_m."""
        out = tuple((m, c.shift_apply(self.m_value(m))) for m, c in self.terms)
        return MSeries(self.gens, self.lambda_base, out, self.cutoff)

    def base_delta(self) -> "MSeries":
        """Reduced-equation operator (lambda_base + hat_delta)."""
        lam = self.lambda_base.value()
        out = tuple((m, c.shift_apply(self.m_value(m) + lam)) for m, c in self.terms)
        return MSeries(self.gens, self.lambda_base, out, self.cutoff)

    def truncate(self, new_cutoff) -> "MSeries":
        new_cutoff = Fraction(new_cutoff) if new_cutoff != INF else INF
        if new_cutoff > self.cutoff:
            raise CutoffIncrease(
                f"truncate: cannot raise cutoff from {self.cutoff} to {new_cutoff}"
            )
        return MSeries(self.gens, self.lambda_base, self.terms, new_cutoff)

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "gens": self.gens.serialize(),
            "lambda_base": self.lambda_base.serialize(),
            "cutoff": None if self.cutoff == INF else float(self.cutoff),
            "terms": [{"m": list(m), "poly": c.serialize()} for m, c in self.terms],
        }

    @staticmethod
    def from_json(data: dict, gens: Generators, lambda_base: Exponent) -> "MSeries":
        cutoff = INF if data.get("cutoff") is None else Fraction(repr(float(data["cutoff"])))
        terms = tuple((tuple(item["m"]), TPoly.parse(item["poly"])) for item in data.get("terms", []))
        return MSeries(gens, lambda_base, terms, cutoff)


# -- transport between the two pictures ---------------------------------------


def iota(f: DulacSeries, gens: Generators, lambda_base: Exponent | None = None) -> MSeries:
    """Rewrite a tail series over exponent coordinates <m, r>.

    Every exponent of f must decompose over the generators; the cutoff is
    the same real number in both pictures since Re<m,r> = Re lambda.
    """
    base = lambda_base if lambda_base is not None else gens.basis.zero()
    terms = []
    for lam, c in f.terms:
        m = decompose(lam, gens)
        if m is None:
            raise ExponentOutsideSemigroup(
                f"iota: exponent {lam} does not decompose over the declared generators"
            )
        terms.append((m, c))
    return MSeries(gens, base, tuple(terms), f.cutoff)


def iota_inv(g: MSeries) -> DulacSeries:
    """Inverse transport; exact two-sided inverse of iota on its image."""
    terms = [(g.gens.m_exponent(m), c) for m, c in g.terms]
    return DulacSeries(g.gens.basis, tuple(terms), g.cutoff)


def fit_degree_K(g: MSeries) -> Fraction:
    """Smallest K with deg C_m <= K |m| over the stored terms."""
    K = Fraction(0)
    for m, c in g.terms:
        if c.degree > 0:
            K = max(K, Fraction(int(c.degree), sum(m)))
    return K


# -- graded norms and estimate checks ------------------------------------------


def _weight(g: MSeries, m, p: NormParams) -> mpmath.mpf:
    """|lambda_base + <m,r>| + Kcal |m| at the working precision."""
    lam = ExactScalar(
        g.lambda_base.re_mid + g.gens.m_re(m), g.lambda_base.im_mid + g.gens.m_im(m)
    )
    return abs_scalar(lam) + to_mpf(p.Kcal) * sum(m)


def _gamma_of_m(g: MSeries, m, p: NormParams) -> mpmath.mpf:
    z = ExactScalar(g.gens.m_re(m) / p.s, g.gens.m_im(m) / p.s)
    return gamma_abs(z, p.tol)


def h_norm(g: MSeries, p: NormParams, level: int | None = None) -> mpmath.mpf:
    """Graded norm at the given level (defaults to p.j)."""
    j = p.j if level is None else level
    with mpmath.workprec(FLOAT_PRECISION):
        acc = mpmath.mpf(0)
        for m, c in g.terms:
            acc += _weight(g, m, p) ** j / _gamma_of_m(g, m, p) * poly_norm(c, p.R)
        return acc


@dataclass(frozen=True)
class Lemma6Report:
    lhs: object
    rhs: object
    C_used: object
    passed: bool
    splits: int


def check_lemma6(g1: MSeries, g2: MSeries, p: NormParams) -> Lemma6Report:
    """Product estimate ||g1 g2||_0 <= C ||g1||_0 ||g2||_0 on concrete data.

    C is the largest Gamma ratio |Gamma(<i,r>/s) Gamma(<m-i,r>/s) / Gamma(<m,r>/s)|
    over the splits realized by the stored terms.
    """
    with mpmath.workprec(FLOAT_PRECISION):
        C_used = mpmath.mpf(1)
        splits = 0
        for m1, _ in g1.terms:
            for m2, _ in g2.terms:
                msum = tuple(a + b for a, b in zip(m1, m2))
                ratio = (
                    _gamma_of_m(g1, m1, p)
                    * _gamma_of_m(g2, m2, p)
                    / _gamma_of_m(g1, msum, p)
                )
                splits += 1
                if splits == 1 or ratio > C_used:
                    C_used = ratio
        lhs = h_norm(g1 * g2, p, level=0)
        rhs = C_used * h_norm(g1, p, level=0) * h_norm(g2, p, level=0)
        passed = bool(lhs <= rhs * (1 + mpmath.mpf(_ROUNDING_SLACK)))
    return Lemma6Report(lhs=lhs, rhs=rhs, C_used=C_used, passed=passed, splits=splits)


@dataclass(frozen=True)
class Lemma5Report:
    lhs: object
    bound: object
    A_tilde: object
    passed: bool


def check_lemma5(a: TPoly, l, j: int, g: MSeries, p: NormParams) -> Lemma5Report:
    """Operator estimate: a(t) X^l (lambda_base + hat_delta)^j maps level p.j
    to level 0 with a computable constant.

    Preconditions (PreconditionViolated otherwise):
      * deg a <= Kcal * |l|,
      * Re<l, r> >= (j - p.j) * s  (the slope gate; trivial when j <= p.j),
      * deg C_m <= Kcal * |m| for the stored terms of g (level membership).
    """
    l = tuple(int(v) for v in l)
    if any(v < 0 for v in l):
        raise PreconditionViolated(f"check_lemma5: negative shift index {l}")
    if a.degree != float("-inf") and a.degree > p.Kcal * sum(l):
        raise PreconditionViolated(
            f"check_lemma5: deg a = {a.degree} exceeds Kcal |l| = {p.Kcal * sum(l)}"
        )
    gate = Fraction(j - p.j) * p.s
    if g.gens.m_re(l) < gate:
        raise PreconditionViolated(
            f"check_lemma5: Re<l,r> = {g.gens.m_re(l)} is below (j - level) s = {gate}; "
            "the operator does not map this level pair continuously"
        )
    for m, c in g.terms:
        if c.degree != float("-inf") and c.degree > p.Kcal * sum(m):
            raise PreconditionViolated(
                f"check_lemma5: term at m = {m} has deg C_m = {c.degree} > Kcal |m| = "
                f"{p.Kcal * sum(m)}; g does not lie in the declared level space"
            )
    h = g
    for _ in range(j):
        h = h.base_delta()
    h = h.mul_poly(a).shift_m(l)
    with mpmath.workprec(FLOAT_PRECISION):
        lhs = h_norm(h, p, level=0)
        na = poly_norm(a, p.R) if not a.is_zero() else mpmath.mpf(0)
        A_tilde = mpmath.mpf(0)
        for m, _ in g.terms:
            msum = tuple(x + y for x, y in zip(m, l))
            w = _weight(g, m, p)
            cand = na * _gamma_of_m(g, m, p) / _gamma_of_m(g, msum, p) * w ** (j - p.j)
            if cand > A_tilde:
                A_tilde = cand
        bound = A_tilde * h_norm(g, p, level=p.j)
        passed = bool(lhs <= bound * (1 + mpmath.mpf(_ROUNDING_SLACK)))
    return Lemma5Report(lhs=lhs, bound=bound, A_tilde=A_tilde, passed=passed)


def majorant_bound(coeffs: dict, rho, tail_norms, gens: Generators, p: NormParams) -> mpmath.mpf:
    """Numeric majorant for a sum of terms a_{pq}(t) X^p u^q evaluated at
    ||u_i||_0 <= tail_norms[i], |X_i| summarized by the single radius rho.

    Each term contributes ||a||_R / |Gamma(<pm,r>/s)| * rho^|pm| * C^|qm| *
    prod tail_norms^qm, where C is the largest realized Gamma product ratio
    (as in check_lemma6) and the Gamma factor is omitted for pm = 0, which
    only enlarges the bound.
    """
    with mpmath.workprec(FLOAT_PRECISION):
        rho = mpmath.mpf(rho) if not isinstance(rho, Fraction) else to_mpf(rho)
        tails = [to_mpf(v) if isinstance(v, Fraction) else mpmath.mpf(v) for v in tail_norms]
        pms = [pm for pm, _ in coeffs if any(pm)]
        C = mpmath.mpf(1)
        for i, pm1 in enumerate(pms):
            for pm2 in pms[i:]:
                msum = tuple(a + b for a, b in zip(pm1, pm2))
                z1 = ExactScalar(gens.m_re(pm1) / p.s, gens.m_im(pm1) / p.s)
                z2 = ExactScalar(gens.m_re(pm2) / p.s, gens.m_im(pm2) / p.s)
                zs = ExactScalar(gens.m_re(msum) / p.s, gens.m_im(msum) / p.s)
                ratio = gamma_abs(z1, p.tol) * gamma_abs(z2, p.tol) / gamma_abs(zs, p.tol)
                if ratio > C:
                    C = ratio
        acc = mpmath.mpf(0)
        for (pm, qm), a in sorted(coeffs.items()):
            if not any(pm) and not any(qm):
                raise ValueError("majorant_bound: term with p = q = 0 is not allowed")
            na = poly_norm(a, p.R)
            if any(pm):
                z = ExactScalar(gens.m_re(pm) / p.s, gens.m_im(pm) / p.s)
                na = na / gamma_abs(z, p.tol)
            term = na * rho ** sum(pm) * C ** sum(qm)
            for ni, qi in zip(tails, qm):
                term *= ni**qi
            acc += term
        return acc
