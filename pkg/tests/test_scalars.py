"""Exact complex rational arithmetic."""

import random
from fractions import Fraction

import pytest

from dulac.scalars import I, ONE, ZERO, ExactScalar


def test_parse_forms():
    assert ExactScalar.parse("3/2") == ExactScalar(Fraction(3, 2), Fraction(0))
    assert ExactScalar.parse("-2") == ExactScalar.of(-2)
    assert ExactScalar.parse("-1/2+3/4i") == ExactScalar(Fraction(-1, 2), Fraction(3, 4))
    assert ExactScalar.parse("1/1-1/1i") == ExactScalar(Fraction(1), Fraction(-1))
    assert ExactScalar.parse("5/3i") == ExactScalar(Fraction(0), Fraction(5, 3))


@pytest.mark.parametrize("bad", ["1.5", "2+3j", "1/0", "", "i", "1 + 2i"])
def test_parse_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        ExactScalar.parse(bad)


def test_str_roundtrip():
    rng = random.Random(11)
    for _ in range(200):
        s = ExactScalar(
            Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
            Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
        )
        assert ExactScalar.parse(str(s)) == s


def test_arithmetic_examples():
    a = ExactScalar(Fraction(1), Fraction(2))
    b = ExactScalar(Fraction(3), Fraction(-4))
    assert a + b == ExactScalar(Fraction(4), Fraction(-2))
    assert a - b == ExactScalar(Fraction(-2), Fraction(6))
    assert a * b == ExactScalar(Fraction(11), Fraction(2))
    # (1+2i)/(3-4i) = (1+2i)(3+4i)/25 = (-5+10i)/25
    assert a / b == ExactScalar(Fraction(-1, 5), Fraction(2, 5))
    assert -a == ExactScalar(Fraction(-1), Fraction(-2))
    assert a.conjugate() == ExactScalar(Fraction(1), Fraction(-2))
    assert a.abs_squared() == Fraction(5)


def test_field_laws_random():
    rng = random.Random(7)
    for _ in range(300):
        a = ExactScalar(Fraction(rng.randint(-6, 6), rng.randint(1, 5)),
                        Fraction(rng.randint(-6, 6), rng.randint(1, 5)))
        b = ExactScalar(Fraction(rng.randint(-6, 6), rng.randint(1, 5)),
                        Fraction(rng.randint(-6, 6), rng.randint(1, 5)))
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + ONE) == a * b + a
        if not b.is_zero():
            assert (a / b) * b == a


def test_constants_and_zero():
    assert ZERO.is_zero() and not bool(ZERO)
    assert ONE * ONE == ONE
    assert I * I == ExactScalar.of(-1)
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
