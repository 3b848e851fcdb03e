from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orbitalg.rings import CoeffRing, QQ, ZZ


def test_kinds():
    assert ZZ.kind == "Z" and not ZZ.is_field
    assert QQ.kind == "Q" and QQ.is_field
    F5 = CoeffRing.prime_field(5)
    assert F5.is_field and F5.p == 5


def test_prime_validation():
    with pytest.raises(ValueError):
        CoeffRing.prime_field(6)
    with pytest.raises(ValueError):
        CoeffRing("F")
    with pytest.raises(ValueError):
        CoeffRing("Z", 3)
    with pytest.raises(ValueError):
        CoeffRing("R")


def test_coerce():
    assert ZZ.coerce(Fraction(4, 2)) == 2
    with pytest.raises(ValueError):
        ZZ.coerce(Fraction(1, 2))
    assert QQ.coerce(3) == Fraction(3)
    F7 = CoeffRing.prime_field(7)
    assert F7.coerce(-1) == 6
    assert F7.coerce(Fraction(1, 2)) == 4  # 2 * 4 = 8 = 1 mod 7


def test_units():
    assert ZZ.is_unit(-1) and not ZZ.is_unit(2)
    assert QQ.is_unit(Fraction(2, 3))
    with pytest.raises(ValueError):
        ZZ.inv(2)
    with pytest.raises(ZeroDivisionError):
        QQ.inv(0)


def test_names():
    assert ZZ.name() == "Z"
    assert QQ.name() == "Q"
    assert CoeffRing.prime_field(3).name() == "F3"


@settings(max_examples=60, derandomize=True)
@given(st.integers(1, 6), st.sampled_from([2, 3, 5, 7, 11]))
def test_prime_field_inverses(a, p):
    F = CoeffRing.prime_field(p)
    x = F.coerce(a)
    if F.is_zero(x):
        return
    assert F.mul(x, F.inv(x)) == F.one()


@settings(max_examples=60, derandomize=True)
@given(st.integers(-20, 20), st.integers(-20, 20))
def test_ring_arithmetic_matches_python(a, b):
    assert ZZ.add(a, b) == a + b
    assert ZZ.mul(a, b) == a * b
    assert QQ.sub(Fraction(a), Fraction(b)) == Fraction(a - b)
