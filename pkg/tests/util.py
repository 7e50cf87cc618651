"""Shared builders for the test suite: canonical equations and seeded random data."""

from fractions import Fraction
from pathlib import Path

from dulac.exponents import ExponentBasis
from dulac.ode import ODESpec
from dulac.scalars import ExactScalar
from dulac.series import INF, DulacSeries
from dulac.tpoly import TPoly

DATA = Path(__file__).parent / "data"


def basis_one() -> ExponentBasis:
    return ExponentBasis(["1"])


def basis_mixed() -> ExponentBasis:
    return ExponentBasis(["1", "1+1i"])


def euler_ode() -> ODESpec:
    # x*(dy) - y + x = 0 with dy the Euler derivative; solution sum (k-1)! x^k
    return ODESpec.from_json({"n": 1, "terms": [
        {"coeff": "1/1", "x": 1, "y": [0, 1]},
        {"coeff": "-1/1", "x": 0, "y": [1, 0]},
        {"coeff": "1/1", "x": 1, "y": [0, 0]},
    ]})


def resonant_ode() -> ODESpec:
    # dy - y - x = 0; the recursion hits L(1) = 0
    return ODESpec.from_json({"n": 1, "terms": [
        {"coeff": "1/1", "x": 0, "y": [0, 1]},
        {"coeff": "-1/1", "x": 0, "y": [1, 0]},
        {"coeff": "-1/1", "x": 1, "y": [0, 0]},
    ]})


def resonant_double_ode() -> ODESpec:
    # (d - 1)^2 y = x expanded
    return ODESpec.from_json({"n": 2, "terms": [
        {"coeff": "1/1", "x": 0, "y": [0, 0, 1]},
        {"coeff": "-2/1", "x": 0, "y": [0, 1, 0]},
        {"coeff": "1/1", "x": 0, "y": [1, 0, 0]},
        {"coeff": "-1/1", "x": 1, "y": [0, 0, 0]},
    ]})


def nonlinear_ode() -> ODESpec:
    # x*(dy) - y + x + y^2 = 0
    return ODESpec.from_json({"n": 1, "terms": [
        {"coeff": "1/1", "x": 1, "y": [0, 1]},
        {"coeff": "-1/1", "x": 0, "y": [1, 0]},
        {"coeff": "1/1", "x": 1, "y": [0, 0]},
        {"coeff": "1/1", "x": 0, "y": [2, 0]},
    ]})


def convergent_ode() -> ODESpec:
    # dy - y/2 - x - x*y = 0; top-order leading coefficient is nonzero
    return ODESpec.from_json({"n": 1, "terms": [
        {"coeff": "1/1", "x": 0, "y": [0, 1]},
        {"coeff": "-1/2", "x": 0, "y": [1, 0]},
        {"coeff": "-1/1", "x": 1, "y": [0, 0]},
        {"coeff": "-1/1", "x": 1, "y": [1, 0]},
    ]})


def x_prefix(basis: ExponentBasis) -> DulacSeries:
    return DulacSeries.monomial(basis.rational(Fraction(1)), TPoly.ONE)


def random_scalar(rng, zero_ok: bool = True) -> ExactScalar:
    s = ExactScalar(
        Fraction(rng.randint(-5, 5), rng.randint(1, 4)),
        Fraction(rng.randint(-3, 3), rng.randint(1, 4)),
    )
    if not zero_ok and s.is_zero():
        return ExactScalar.of(1)
    return s


def random_poly(rng, max_deg: int = 3) -> TPoly:
    coeffs = [random_scalar(rng) for _ in range(rng.randint(0, max_deg) + 1)]
    if all(c.is_zero() for c in coeffs):
        coeffs[0] = ExactScalar.of(1)
    return TPoly(tuple(coeffs))


def random_exponent(rng, basis: ExponentBasis, positive: bool = True):
    while True:
        coords = [Fraction(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(basis.dim)]
        e = basis.exponent(coords)
        if not positive or e.re_mid > 0:
            return e


def random_series(rng, basis: ExponentBasis, max_terms: int = 4, cutoff=INF) -> DulacSeries:
    terms = [
        (random_exponent(rng, basis), random_poly(rng))
        for _ in range(rng.randint(0, max_terms))
    ]
    return DulacSeries(basis, tuple(terms), cutoff)
