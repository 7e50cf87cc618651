"""Linearization data, the coefficient recursion, and prefix extension.

Given F(x, y, delta y, ..., delta^n y) = 0 and a prefix phi of a candidate
Dulac-series solution, the derivatives of F along phi decompose as

    dF/dy_j (x, phi, ...) = A_j x^nu + B_j(t) x^{nu_j} + ...

with one shared leading exponent nu, constant leading coefficients A_j (zero
for the derivatives that start later), and secondary terms of strictly larger
real part.  The characteristic polynomial L(zeta) = sum A_j zeta^j over
j <= ell, ell = max{j : A_j != 0}, drives the term-by-term recursion: each
new term c(t) x^l of the solution solves L(l + d/dt) c = b against the
lowest term b of the current residual.  L(l) != 0 makes that solvable with a
unique polynomial of the same degree; L(l) = 0 is a resonance and requires
the user to supply the logarithmic part by hand in the prefix.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

import mpmath

from .errors import (
    AllDerivativesVanish,
    DerivativeYnZeroWarning,
    HypothesisViolation,
    IndeterminateRoot,
    LinearDataDrift,
    NonpositiveValuation,
    NonProgressingResidual,
    Resonance,
)
from .exponents import Exponent, exp_compare, re_compare
from .numeric import FLOAT_PRECISION, float_str, to_mpf
from .ode import ODESpec
from .scalars import ExactScalar, ZERO
from .series import INF, DulacSeries
from .tpoly import TPoly

MAX_EXTENSION_STEPS = 10000
ROOT_BAND = Fraction(1, 10**20)


@dataclass(frozen=True)
class LinearData:
    """Leading data of the derivatives of F along a prefix."""

    nu: Exponent          # shared leading exponent
    A: tuple              # ExactScalar, length n+1
    nu_sec: tuple         # Exponent | None: secondary exponents nu_j
    B: tuple              # TPoly | None: secondary coefficients
    ell: int              # max j with A_j nonzero
    L: TPoly              # characteristic polynomial in zeta
    n: int

    def stability_key(self):
        return (self.nu.coords, self.A, self.ell)

    def slope(self):
        from .gevrey import slope

        return slope(self)

    def tau_re(self, s=None) -> Fraction:
        """Real value tau = (n - ell) * s; zero when ell = n."""
        if self.ell == self.n:
            return Fraction(0)
        s = self.slope() if s is None else s
        return (self.n - self.ell) * Fraction(s)

    def tau_exponent(self, s=None) -> Exponent:
        """tau embedded as an exponent over the basis (needs the entry 1)."""
        if self.ell == self.n:
            return self.nu.basis.zero()
        return self.nu.basis.rational(self.tau_re(s))

    def to_json(self) -> dict:
        return {
            "nu": self.nu.serialize(),
            "A": [str(a) for a in self.A],
            "nu_secondary": [e.serialize() if e is not None else None for e in self.nu_sec],
            "B": [c.serialize() if c is not None else None for c in self.B],
            "ell": self.ell,
            "L": self.L.serialize(),
        }


def extract_linearization(F: ODESpec, phi: DulacSeries) -> LinearData:
    """Decompose the derivatives of F along phi into leading and secondary data.

    phi may be the zero series (seeding an empty prefix): only the monomials
    of each derivative that are free of y survive in that case.
    """
    G = [F.partial(j).substitute(phi) for j in range(F.n + 1)]
    nonzero = [g for g in G if g.terms]
    if not nonzero:
        raise AllDerivativesVanish(
            "extract_linearization: every derivative of F vanishes along the prefix"
        )
    nu = min((g.terms[0][0] for g in nonzero), key=_cmp_key)
    A, nu_sec, B = [], [], []
    for j, g in enumerate(G):
        if not g.terms:
            A.append(ZERO)
            nu_sec.append(None)
            B.append(None)
            continue
        lead_e, lead_c = g.terms[0]
        if lead_e.coords == nu.coords:
            if lead_c.degree != 0:
                raise HypothesisViolation(
                    f"extract_linearization: coefficient of x^{nu} in dF/dy_{j} is "
                    f"the nonconstant polynomial {lead_c}; the leading linear data "
                    "must be constant"
                )
            A.append(lead_c[0])
            rest = g.terms[1:]
        else:
            A.append(ZERO)
            rest = g.terms
        if rest:
            e2, c2 = rest[0]
            if re_compare(e2, nu) <= 0:
                raise HypothesisViolation(
                    f"extract_linearization: secondary exponent {e2} of dF/dy_{j} does "
                    f"not exceed nu = {nu} in real part"
                )
            nu_sec.append(e2)
            B.append(c2)
        else:
            nu_sec.append(None)
            B.append(None)
    if not G[F.n].terms:
        warnings.warn(
            DerivativeYnZeroWarning(
                f"dF/dy_{F.n} vanishes below cutoff {G[F.n].cutoff}; the equation "
                "may be degenerate in its top-order variable"
            )
        )
    ell = max(j for j, a in enumerate(A) if not a.is_zero())
    L = TPoly(tuple(A[: ell + 1]))
    return LinearData(nu=nu, A=tuple(A), nu_sec=tuple(nu_sec), B=tuple(B), ell=ell, L=L, n=F.n)


class _cmp_key:
    """functools-style key wrapper around exp_compare for min/sort."""

    __slots__ = ("e",)

    def __init__(self, e):
        self.e = e

    def __lt__(self, other):
        return exp_compare(self.e, other.e) < 0


def roots_of_L(L: TPoly, prec: int = FLOAT_PRECISION) -> list:
    """Roots of the characteristic polynomial as mpc values.

    Degrees 1 and 2 use closed forms, higher degrees a numeric companion
    solve at the working precision.
    """
    d = L.degree
    if d in (float("-inf"), 0):
        return []
    with mpmath.workprec(prec):
        cs = [
            mpmath.mpc(to_mpf(c.re, prec), to_mpf(c.im, prec)) for c in L.coeffs
        ]
        if d == 1:
            return [-cs[0] / cs[1]]
        if d == 2:
            a, b, c = cs[2], cs[1], cs[0]
            disc = mpmath.sqrt(b * b - 4 * a * c)
            return [(-b + disc) / (2 * a), (-b - disc) / (2 * a)]
        return list(mpmath.polyroots(list(reversed(cs)), maxsteps=200, extraprec=64))


@dataclass(frozen=True)
class ConditionReport:
    """Solvability conditions for splitting the solution at the last prefix term."""

    roots_ok: bool            # every root of L lies left of Re lambda_m
    gap_ok: bool              # Re lambda_m > max Re nu_j + 2 tau
    next_ok: bool | None      # Re(lambda_{m+1} - lambda_m) > 0, when known
    root_margin: float | None
    gap_margin: float | None
    minimal_m: int | None     # least prefix index where roots_ok and gap_ok hold
    roots: tuple

    def to_json(self) -> dict:
        return {
            "roots_ok": self.roots_ok,
            "gap_ok": self.gap_ok,
            "next_ok": self.next_ok,
            "root_margin": self.root_margin,
            "gap_margin": self.gap_margin,
            "minimal_m": self.minimal_m,
            "roots": [[float(mpmath.re(r)), float(mpmath.im(r))] for r in self.roots],
        }


def check_conditions(
    lin: LinearData,
    prefix_exponents,
    next_exponent: Exponent | None = None,
    s=None,
) -> ConditionReport:
    """Evaluate the splitting conditions at the last prefix exponent.

    Raises IndeterminateRoot when a root of L sits within 1e-20 of the
    boundary Re zeta = Re lambda_m: either more precision is required or the
    configuration is genuinely resonant.
    """
    if not prefix_exponents:
        raise ValueError("check_conditions: prefix must contain at least one term")
    roots = roots_of_L(lin.L)
    tau = lin.tau_re(s)
    sec_res = [e.re_mid for e in lin.nu_sec if e is not None]

    def roots_check(lam_re: Fraction):
        if not roots:
            return True, None
        with mpmath.workprec(FLOAT_PRECISION):
            lam_mpf = to_mpf(lam_re)
            margins = [lam_mpf - mpmath.re(r) for r in roots]
            m = min(margins)
            if abs(m) < to_mpf(ROOT_BAND):
                raise IndeterminateRoot(
                    f"check_conditions: a root of L has real part within 1e-20 of "
                    f"Re lambda_m = {lam_re}; raise precision or treat as resonant"
                )
            return bool(m > 0), float(m)

    def gap_check(lam_re: Fraction):
        if not sec_res:
            return True, None
        margin = lam_re - max(sec_res) - 2 * tau
        return margin > 0, float(margin)

    minimal_m = None
    for i, lam in enumerate(prefix_exponents, start=1):
        try:
            ok1, _ = roots_check(lam.re_mid)
        except IndeterminateRoot:
            ok1 = False
        ok2, _ = gap_check(lam.re_mid)
        if ok1 and ok2:
            minimal_m = i
            break

    lam_last = prefix_exponents[-1]
    roots_ok, root_margin = roots_check(lam_last.re_mid)
    gap_ok, gap_margin = gap_check(lam_last.re_mid)
    next_ok = None
    if next_exponent is not None:
        next_ok = re_compare(next_exponent, lam_last) > 0
    return ConditionReport(
        roots_ok=roots_ok,
        gap_ok=gap_ok,
        next_ok=next_ok,
        root_margin=root_margin,
        gap_margin=gap_margin,
        minimal_m=minimal_m,
        roots=tuple(roots),
    )


def solve_coefficient(L: TPoly, lam, b: TPoly) -> TPoly:
    """Unique polynomial v with L(lam + d/dt) v = b, given L(lam) != 0.

    The operator acts triangularly in the degree: expanding L(lam + d/dt) =
    sum_i L^(i)(lam)/i! (d/dt)^i, the top coefficient of v is fixed by
    L(lam) alone and lower ones follow by back-substitution.  All arithmetic
    is exact; L(lam) = 0 raises Resonance.
    """
    lam_v = lam.value() if isinstance(lam, Exponent) else lam
    M = L.taylor_at(lam_v)
    if M[0].is_zero():
        raise Resonance(
            f"solve_coefficient: characteristic polynomial vanishes at lambda = {lam}; "
            "the recursion has no unique polynomial solution there",
            exponent=lam,
        )
    if b.is_zero():
        return TPoly.ZERO
    D = b.degree
    v = [ZERO] * (D + 1)
    for d in range(D, -1, -1):
        acc = b[d]
        for i in range(1, len(M)):
            if d + i <= D:
                ff = prod(range(d + 1, d + i + 1))  # (d+i)! / d!
                acc = acc - M[i] * (v[d + i] * Fraction(ff))
        v[d] = acc / M[0]
    return TPoly(tuple(v))


@dataclass(frozen=True)
class SolutionState:
    """A solved (or partially solved) prefix together with its audit trail."""

    F: ODESpec
    solution: DulacSeries
    residual: DulacSeries
    lin: LinearData
    history: tuple  # of (lambda_k, c_k, b_k)

    def exponents(self) -> list:
        return [e for e, _ in self.solution.terms]

    def to_json(self) -> dict:
        return {
            "solution": self.solution.to_json(),
            "residual": self.residual.to_json(),
            "linearization": self.lin.to_json(),
            "history": [
                {"lambda": e.serialize(), "c": c.serialize(), "b": b.serialize()}
                for e, c, b in self.history
            ],
        }


def extend(F: ODESpec, prefix: DulacSeries, target_cutoff) -> SolutionState:
    """Extend a prefix to all exponents with real part below target_cutoff.

    The prefix is interpreted as exact leading data (terms are trusted as the
    actual first terms of a formal solution).  Starting from an empty prefix
    is allowed: the first residual term seeds lambda_1 unless it is resonant.
    Each step takes the lowest residual term beta(t) x^sigma, forms
    lambda_new = sigma - nu, requires it to strictly increase, and solves
    L(lambda_new + d/dt) c = -beta.  After the loop the linearization is
    re-extracted from the full solution; if (nu, A, ell) changed, the run is
    restarted once with the stabilized data before giving up.
    """
    target = Fraction(target_cutoff) if target_cutoff != INF else INF
    return _extend(F, prefix, target, pinned=None, allow_restart=True)


def _extend(F, prefix, target, pinned, allow_restart) -> SolutionState:
    sol = DulacSeries(prefix.basis, prefix.terms, INF)
    lin = pinned if pinned is not None else extract_linearization(F, sol)
    nu_re = lin.nu.re_mid
    history = []
    steps = 0
    while True:
        residual = F.substitute(sol)
        limit = min(target + nu_re, residual.cutoff)
        head = residual.leading()
        if head is None or not head[0].re_below(limit):
            break
        sigma, beta = head
        lam_new = sigma - lin.nu
        if sol.terms:
            if exp_compare(lam_new, sol.terms[-1][0]) <= 0:
                raise NonProgressingResidual(
                    f"extend: next exponent {lam_new} does not exceed the last "
                    f"solved exponent {sol.terms[-1][0]}; the prefix is not a "
                    "consistent germ of a solution"
                )
        elif lam_new.re_sign() <= 0:
            raise NonpositiveValuation(
                f"extend: first solution exponent {lam_new} has nonpositive real "
                "part; no admissible series solution starts there"
            )
        c_new = solve_coefficient(lin.L, lam_new, -beta)
        sol = sol + DulacSeries.monomial(lam_new, c_new)
        history.append((lam_new, c_new, -beta))
        steps += 1
        if steps > MAX_EXTENSION_STEPS:
            raise NonProgressingResidual(
                f"extend: more than {MAX_EXTENSION_STEPS} terms below cutoff "
                f"{target}; the exponents accumulate without reaching it"
            )
    lin_final = lin
    if sol.terms:
        lin_final = extract_linearization(F, sol)
        if lin_final.stability_key() != lin.stability_key():
            if not allow_restart:
                raise LinearDataDrift(
                    "extend: linearization (nu, A, ell) changed again after the "
                    "adaptive restart; the prefix does not stabilize the data"
                )
            return _extend(F, prefix, target, pinned=lin_final, allow_restart=False)
    achieved = min(target, residual.cutoff - nu_re)
    solution = DulacSeries(sol.basis, sol.terms, achieved)
    return SolutionState(F=F, solution=solution, residual=residual, lin=lin_final, history=tuple(history))


@dataclass(frozen=True)
class ReducedEquation:
    """Data of the equation satisfied by the normalized tail u, where
    y = phi_m + x^{lambda_m} u:

        L(lambda_m + delta) u + sum_j Ltilde_j(t, x) (lambda_m + delta)^j u
          + sum_q a_q(t, x) x^{tau |q|} prod_j ((lambda_m + delta)^j u)^{q_j} = 0

    with a_q = x^{(|q|-1) lambda_m - nu - tau |q|} * (1/q!) d^q F(x, phi_m).
    Violations of the splitting conditions are recorded, not raised.
    """

    L: TPoly
    Ltilde: tuple      # of (j, DulacSeries), j = 0..n, nonzero only
    N: tuple           # of (q, DulacSeries) with |q| != 1, nonzero only
    lambda_m: Exponent
    nu: Exponent
    tau: Exponent
    violations: tuple

    def to_json(self) -> dict:
        return {
            "L": self.L.serialize(),
            "lambda_m": self.lambda_m.serialize(),
            "nu": self.nu.serialize(),
            "tau": self.tau.serialize(),
            "Ltilde": [{"j": j, "series": g.to_json()} for j, g in self.Ltilde],
            "N": [{"q": list(q), "series": g.to_json()} for q, g in self.N],
            "violations": list(self.violations),
        }


def reduce_equation(F: ODESpec, prefix: DulacSeries, m: int, s=None) -> ReducedEquation:
    """Build the reduced equation for the tail after the first m prefix terms."""
    if not 1 <= m <= len(prefix.terms):
        raise ValueError(
            f"reduce_equation: m = {m} outside 1..{len(prefix.terms)} prefix terms"
        )
    basis = prefix.basis
    phi = DulacSeries(basis, prefix.terms[:m], INF)
    lin = extract_linearization(F, phi)
    lam_m = phi.terms[-1][0]
    s_val = lin.slope() if s is None else s
    tau = lin.tau_exponent(s_val)
    tau_re = tau.re_mid

    violations = []
    ltilde = []
    nterms = []
    bounds = F.y_degree_bounds()
    for q in _multi_indices(bounds):
        Fq = F.partial_multi(q)
        if not Fq.terms:
            continue
        fq = Fq.substitute(phi)
        if fq.is_zero():
            continue
        k = sum(q)
        if k == 1:
            j = q.index(1)
            g = fq.shift(-lin.nu) - DulacSeries.monomial(basis.zero(), TPoly.const(lin.A[j]))
            if g.is_zero():
                continue
            if not g.val() > 0:
                violations.append(
                    f"Ltilde_{j} has a term with nonpositive exponent (val {g.val()})"
                )
            ltilde.append((j, g))
        else:
            shift = lam_m * (k - 1) - lin.nu - tau * k
            aq = fq.shift(shift)
            if not aq.val() > 0:
                violations.append(
                    f"a_q for q = {q} has valuation {aq.val()} <= 0; the gap "
                    "condition Re lambda_m > max Re nu_j + 2 tau fails at this m"
                )
            nterms.append((q, aq))

    if lin.ell < F.n:
        for j in range(lin.ell + 1, F.n + 1):
            if lin.nu_sec[j] is not None:
                mu_re = lin.nu_sec[j].re_mid - lin.nu.re_mid
                if mu_re < (j - lin.ell) * Fraction(s_val):
                    violations.append(
                        f"secondary gap Re mu_{j} = {mu_re} is below (j - ell) s = "
                        f"{(j - lin.ell) * Fraction(s_val)}"
                    )
    try:
        report = check_conditions(lin, [e for e, _ in phi.terms], s=s_val)
        if not report.roots_ok:
            violations.append(
                f"a root of L has real part >= Re lambda_m = {lam_m.re_mid}"
            )
        if not report.gap_ok:
            violations.append(
                f"Re lambda_m = {lam_m.re_mid} does not exceed max Re nu_j + 2 tau"
            )
    except IndeterminateRoot as exc:
        violations.append(str(exc))

    return ReducedEquation(
        L=lin.L,
        Ltilde=tuple(ltilde),
        N=tuple(nterms),
        lambda_m=lam_m,
        nu=lin.nu,
        tau=tau,
        violations=tuple(violations),
    )


def _multi_indices(bounds):
    """All q with 0 <= q_j <= bounds_j, including q = 0 (the residual term)."""
    out = [()]
    for b in bounds:
        out = [q + (i,) for q in out for i in range(b + 1)]
    return out


def reduced_residual(red: ReducedEquation, psi: DulacSeries) -> DulacSeries:
    """Evaluate the reduced equation at a tail candidate psi (for checking)."""
    lam_v = red.lambda_m.value()
    basis = psi.basis

    powers = {0: psi}

    def op(j):
        if j not in powers:
            u = op(j - 1)
            powers[j] = u.delta() + u * lam_v
        return powers[j]

    acc = DulacSeries.zero(basis, psi.cutoff)
    for i, coeff in enumerate(red.L.coeffs):
        if not coeff.is_zero():
            acc = acc + op(i) * coeff
    for j, g in red.Ltilde:
        acc = acc + g * op(j)
    for q, aq in red.N:
        k = sum(q)
        term = aq.shift(red.tau * k)
        for j, e in enumerate(q):
            for _ in range(e):
                term = term * op(j)
        acc = acc + term
    return acc
