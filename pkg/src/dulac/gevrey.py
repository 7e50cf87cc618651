"""Growth classification of solved coefficient sequences.

The coefficient polynomials of a solved series are expected to grow no
faster than C * A^k * |Gamma(lambda_k / s)| in the weighted norm, where the
order parameter s comes from the linearization: s = +inf when the top
derivative participates in the leading data (A_n != 0, the convergent case),
and otherwise

    s = min over j > ell of (Re nu_j - Re nu) / (j - ell).

classify() normalizes the observed norms, fits the smallest geometric
envelope over the data, and reports a verdict.  The fit is descriptive: the
envelope holds for the recorded k by construction, so the value of the
report is in the fitted constants, not the boolean.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import SlopeUndetermined
from .gammafn import gamma_abs
from .numeric import FLOAT_PRECISION, float_str, to_mpf
from .scalars import ExactScalar
from .tpoly import poly_norm

INF = float("inf")

CSV_COLUMNS = ["k", "re_lambda", "im_lambda", "deg_c", "norm_R", "gamma_abs", "rho", "envelope_Ck"]


def slope(lin) -> object:
    """Growth order parameter from the linearization; +inf when A_n != 0."""
    if not lin.A[lin.n].is_zero():
        return INF
    cands = []
    for j in range(lin.ell + 1, lin.n + 1):
        if lin.nu_sec[j] is not None:
            cands.append(
                (lin.nu_sec[j].re_mid - lin.nu.re_mid) / Fraction(j - lin.ell)
            )
    if not cands:
        raise SlopeUndetermined(
            "slope: A_n = 0 and no derivative shows a secondary term below the "
            "cutoff; the growth order cannot be determined from the data"
        )
    return min(cands)


@dataclass(frozen=True)
class RhoRow:
    k: int
    re_lambda: Fraction
    im_lambda: Fraction
    deg_c: object  # int or -inf
    norm_R: object  # mpf
    gamma: object  # mpf (1 in the convergent case)
    rho: object  # mpf


def normalized_coeffs(terms, s, R, tol: float = 1e-12) -> list:
    """Gamma-normalized norm table rho_k = ||c_k||_R / |Gamma(lambda_k / s)|.

    terms are (Exponent, TPoly) pairs of a solved series, k is their 1-based
    position.  Requires finite s > 0 and Re(lambda_k / s) > 0 for every k.
    """
    if s == INF:
        raise ValueError("normalized_coeffs: use the geometric envelope for s = +inf")
    s_q = Fraction(s)
    if s_q <= 0:
        raise ValueError(f"normalized_coeffs: s must be positive, got {s}")
    rows = []
    for k, (lam, c) in enumerate(terms, start=1):
        z = ExactScalar(lam.re_mid / s_q, lam.im_mid / s_q)
        g = gamma_abs(z, tol)
        nr = poly_norm(c, R)
        with mpmath.workprec(FLOAT_PRECISION):
            rows.append(RhoRow(k, lam.re_mid, lam.im_mid, c.degree, nr, g, nr / g))
    return rows


def fit_growth(rhos) -> tuple:
    """Smallest same-k-grid geometric envelope over the observed sequence.

    A_fit is the largest consecutive ratio rho_{k+1}/rho_k clamped below at 1,
    C_fit = max_k rho_k / A_fit^k.  Returns (C_fit, A_fit, k_C, k_A) with the
    indices achieving each maximum (1-based positions, k_A of the ratio's
    left endpoint; None when fewer than two entries).
    """
    vals = [(k, r) for k, r in enumerate(rhos, start=1) if r != 0]
    if not vals:
        return mpmath.mpf(0), mpmath.mpf(1), None, None
    with mpmath.workprec(FLOAT_PRECISION):
        A = mpmath.mpf(1)
        k_A = None
        for (k1, r1), (k2, r2) in zip(vals, vals[1:]):
            ratio = (r2 / r1) ** (mpmath.mpf(1) / (k2 - k1))
            if ratio > A:
                A, k_A = ratio, k1
        C = mpmath.mpf(0)
        k_C = None
        for k, r in vals:
            c = r / A**k
            if c > C:
                C, k_C = c, k
        return C, A, k_C, k_A


@dataclass(frozen=True)
class GevreyReport:
    s: object            # Fraction or +inf
    rows: tuple          # of RhoRow
    C_fit: object        # mpf
    A_fit: object        # mpf
    R_used: object       # Fraction
    verdict: str         # GevreyBounded | ConvergentCandidate | Inconclusive
    radius_estimate: object  # mpf or None (1/A_fit in the convergent case)

    def envelope_at(self, row: RhoRow):
        with mpmath.workprec(FLOAT_PRECISION):
            if self.s == INF:
                return self.C_fit * self.A_fit ** to_mpf(row.re_lambda)
            return self.C_fit * self.A_fit ** row.k

    def to_json(self) -> dict:
        return {
            "s": "inf" if self.s == INF else str(Fraction(self.s)),
            "R": float(self.R_used),
            "C_fit": float(self.C_fit),
            "A_fit": float(self.A_fit),
            "verdict": self.verdict,
            "radius_estimate": None if self.radius_estimate is None else float(self.radius_estimate),
            "rows": [
                {
                    "k": r.k,
                    "re_lambda": float(r.re_lambda),
                    "im_lambda": float(r.im_lambda),
                    "deg_c": None if r.deg_c == float("-inf") else r.deg_c,
                    "norm_R": float(r.norm_R),
                    "gamma_abs": float(r.gamma),
                    "rho": float(r.rho),
                    "envelope_Ck": float(self.envelope_at(r)),
                }
                for r in self.rows
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(
                [
                    r.k,
                    float_str(r.re_lambda),
                    float_str(r.im_lambda),
                    0 if r.deg_c == float("-inf") else r.deg_c,
                    float_str(r.norm_R),
                    float_str(r.gamma),
                    float_str(r.rho),
                    float_str(self.envelope_at(r)),
                ]
            )
        return buf.getvalue()


def classify(state, s, R, tol: float = 1e-12) -> GevreyReport:
    """Fit a growth envelope for a solved state and render a verdict.

    Finite s: rho_k = ||c_k||_R / |Gamma(lambda_k/s)| is fitted against
    C * A^k.  Infinite s (convergent candidate): the plain norms are fitted
    against C * A^{Re lambda_k}, giving 1/A as a lower estimate of the
    radius.  Fewer than three terms is Inconclusive unless the residual is
    identically zero below the cutoff (a terminating solution).
    """
    terms = state.solution.terms
    terminating = state.residual.is_zero()
    R_q = Fraction(R)
    if s == INF:
        with mpmath.workprec(FLOAT_PRECISION):
            rows = [
                RhoRow(k, lam.re_mid, lam.im_mid, c.degree, poly_norm(c, R_q), mpmath.mpf(1), poly_norm(c, R_q))
                for k, (lam, c) in enumerate(terms, start=1)
            ]
            A = mpmath.mpf(1)
            for r1, r2 in zip(rows, rows[1:]):
                gap = to_mpf(r2.re_lambda - r1.re_lambda)
                ratio = (r2.norm_R / r1.norm_R) ** (1 / gap)
                if ratio > A:
                    A = ratio
            C = mpmath.mpf(0)
            for r in rows:
                c = r.norm_R / A ** to_mpf(r.re_lambda)
                if c > C:
                    C = c
        verdict = "ConvergentCandidate" if (terminating or len(rows) >= 3) else "Inconclusive"
        radius = None
        if rows:
            with mpmath.workprec(FLOAT_PRECISION):
                radius = 1 / A
        return GevreyReport(INF, tuple(rows), C, A, R_q, verdict, radius)

    rows = normalized_coeffs(terms, s, R_q, tol)
    C, A, _, _ = fit_growth([r.rho for r in rows])
    verdict = "GevreyBounded" if (len(rows) >= 3 or terminating) else "Inconclusive"
    return GevreyReport(Fraction(s), tuple(rows), C, A, R_q, verdict, None)
