"""ODESpec: validation, partial derivatives, substitution paths."""

import random
from fractions import Fraction

import pytest

from dulac.errors import NonpositiveValuation, SchemaError
from dulac.ode import ODESpec
from dulac.scalars import ExactScalar
from dulac.series import INF, DulacSeries
from dulac.tpoly import TPoly

from .util import basis_one, euler_ode, nonlinear_ode, random_series, x_prefix


def test_from_json_euler():
    ode = euler_ode()
    assert ode.n == 1
    assert len(ode.terms) == 3
    assert ode.declared_degree is None


@pytest.mark.parametrize(
    "data",
    [
        {"terms": []},  # n missing
        {"n": 0, "terms": [{"coeff": "1/1", "x": 1, "y": [1]}]},  # order < 1
        {"n": 1, "terms": [{"coeff": "1/1", "x": 1, "y": [0]}]},  # y-vector too short
        {"n": 1, "terms": [{"coeff": "1/1", "x": -1, "y": [0, 1]}]},  # negative power
        {"n": 1, "terms": [{"coeff": "1/1", "x": 0, "y": [0, 0]}]},  # constant monomial
        {"n": 1, "terms": [{"coeff": "0/1", "x": 1, "y": [0, 1]}]},  # zero coefficient
        {
            "n": 1,
            "terms": [
                {"coeff": "1/1", "x": 1, "y": [0, 1]},
                {"coeff": "2/1", "x": 1, "y": [0, 1]},
            ],
        },  # duplicate monomial
        {
            "n": 1,
            "degree": 1,
            "terms": [{"coeff": "1/1", "x": 1, "y": [0, 1]}],
        },  # monomial above declared degree
        {"n": 1, "terms": [{"coeff": "not a number", "x": 1, "y": [0, 1]}]},
    ],
)
def test_from_json_rejects(data):
    with pytest.raises(SchemaError):
        ODESpec.from_json(data)


def test_partial_power_rule():
    # F = y_0^3 => dF/dy_0 = 3 y_0^2
    ode = ODESpec(1, ((ExactScalar.of(1), 0, (3, 0)),))
    d = ode.partial(0)
    assert d.terms == ((ExactScalar.of(3), 0, (2, 0)),)
    # second derivative scaled: (1/q!) d^2/dy_0^2 -> binomial weight C(3,2) = 3
    d2 = ode.partial_multi((2, 0))
    assert d2.terms == ((ExactScalar.of(3), 0, (1, 0)),)
    with pytest.raises(ValueError):
        ode.partial(2)
    with pytest.raises(ValueError):
        ode.partial_multi((1,))


def test_partial_drops_missing_variable():
    ode = euler_ode()  # no y_1^2 term, so d/dy_1 has a single monomial
    d = ode.partial(1)
    assert len(d.terms) == 1
    coeff, p, q = d.terms[0]
    assert (p, q) == (1, (0, 0))


def test_substitute_euler_at_x():
    # F = x*dy - y + x at phi = x: delta x = x, so F = x^2 exactly
    basis = basis_one()
    res = euler_ode().substitute(x_prefix(basis))
    assert len(res.terms) == 1
    e, c = res.terms[0]
    assert e.coords == (Fraction(2),)
    assert c == TPoly.ONE
    assert res.cutoff == INF


def test_substitute_nonlinear_at_x():
    # extra y_0^2 contributes another x^2: F = 2 x^2
    basis = basis_one()
    res = nonlinear_ode().substitute(x_prefix(basis))
    assert len(res.terms) == 1
    assert res.terms[0][1] == TPoly.of(2)


def test_substitute_requires_positive_valuation():
    basis = basis_one()
    bad = DulacSeries.monomial(basis.rational(0), TPoly.ONE)
    with pytest.raises(NonpositiveValuation):
        euler_ode().substitute(bad)
    neg = DulacSeries.monomial(basis.rational(-1), TPoly.ONE)
    with pytest.raises(NonpositiveValuation):
        euler_ode().substitute_direct(neg)


def test_substitute_zero_phi_allowed():
    basis = basis_one()
    res = euler_ode().substitute(DulacSeries.zero(basis))
    # only the pure-x monomial survives
    assert [e.coords for e, _ in res.terms] == [(Fraction(1),)]


def test_substitute_paths_agree_random():
    basis = basis_one()
    rng = random.Random(53)
    ode = nonlinear_ode()
    for _ in range(40):
        phi = random_series(rng, basis, max_terms=3)
        if phi.terms and phi.terms[0][0].re_sign() <= 0:
            continue
        assert ode.substitute(phi) == ode.substitute_direct(phi)


def test_declared_degree_caps_cutoff():
    # truncated Taylor data: result only trusted up to (D+1)*min(1, val phi)
    ode = ODESpec(
        1,
        (
            (ExactScalar.of(1), 1, (0, 0)),
            (ExactScalar.of(1), 0, (0, 1)),
        ),
        declared_degree=2,
    )
    basis = basis_one()
    res = ode.substitute(x_prefix(basis))
    assert res.cutoff == Fraction(3)
    half = DulacSeries.monomial(basis.rational(Fraction(1, 2)), TPoly.ONE)
    res2 = ode.substitute(half)
    assert res2.cutoff == Fraction(3, 2)


def test_json_roundtrip():
    ode = nonlinear_ode()
    again = ODESpec.from_json(ode.to_json())
    assert again == ode
    capped = ODESpec(1, ((ExactScalar.of(1), 0, (0, 1)),), declared_degree=3)
    assert ODESpec.from_json(capped.to_json()).declared_degree == 3


def test_y_degree_bounds():
    assert nonlinear_ode().y_degree_bounds() == (2, 1)
    assert euler_ode().y_degree_bounds() == (1, 1)
