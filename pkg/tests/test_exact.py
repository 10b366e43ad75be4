"""Tests for the exact signed-sqrt-of-rational arithmetic."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from so3tp.exact import (
    SQRT_ONE,
    SQRT_ZERO,
    SqrtRational,
    term_add_into,
    term_from_sqrt,
    term_mul,
)


def test_canonical_forms():
    assert str(SQRT_ZERO) == "0"
    assert str(SQRT_ONE) == "+sqrt(1/1)"
    v = SqrtRational(-1, Fraction(24, 648))
    assert (v.p, v.q) == (1, 27)  # lowest terms
    assert str(v) == "-sqrt(1/27)"
    assert float(v) == pytest.approx(-1 / math.sqrt(27), abs=1e-15)


def test_invalid_forms_rejected():
    with pytest.raises(ValueError):
        SqrtRational(2, Fraction(1))
    with pytest.raises(ValueError):
        SqrtRational(1, Fraction(-1, 2))
    with pytest.raises(ValueError):
        SqrtRational(0, Fraction(1, 2))


def test_multiplication():
    a = SqrtRational(1, Fraction(1, 2))
    b = SqrtRational(-1, Fraction(2, 3))
    assert a * b == SqrtRational(-1, Fraction(1, 3))
    assert (a * SQRT_ZERO).is_zero()
    assert -b == SqrtRational(1, Fraction(2, 3))


def test_term_normalization_extracts_squares():
    # 5 * sqrt(72/50) = 5 * (6/5) sqrt(2/... ): 72*50 = 3600 = 60^2
    coeff, primes = term_from_sqrt(Fraction(5), Fraction(72, 50))
    assert primes == frozenset()
    assert coeff == Fraction(5) * Fraction(60, 50)
    coeff, primes = term_from_sqrt(Fraction(1), Fraction(12))
    assert primes == frozenset({3}) and coeff == 2


def test_term_mul_merges_radicands():
    t1 = term_from_sqrt(Fraction(1), Fraction(6))   # sqrt(6)
    t2 = term_from_sqrt(Fraction(1), Fraction(10))  # sqrt(10)
    coeff, primes = term_mul(t1, t2)  # sqrt(60) = 2 sqrt(15)
    assert coeff == 2 and primes == frozenset({3, 5})


def test_sum_collapse_and_cancellation():
    acc = {}
    term_add_into(acc, term_from_sqrt(Fraction(1), Fraction(2)))
    term_add_into(acc, term_from_sqrt(Fraction(-1), Fraction(2)))
    assert SqrtRational.from_sum(acc).is_zero()
    term_add_into(acc, term_from_sqrt(Fraction(1, 3), Fraction(8)))
    assert SqrtRational.from_sum(acc) == SqrtRational(1, Fraction(8, 9))
    term_add_into(acc, term_from_sqrt(Fraction(1), Fraction(3)))
    with pytest.raises(ValueError):
        SqrtRational.from_sum(acc)  # sqrt(2) + sqrt(3) is not a single surd


@given(st.integers(1, 10**6), st.integers(1, 10**6), st.booleans())
def test_float_round_trip(p, q, neg):
    v = SqrtRational(-1 if neg else 1, Fraction(p, q))
    expect = (-1 if neg else 1) * math.sqrt(p / q)
    assert float(v) == pytest.approx(expect, rel=1e-12)


@given(st.integers(1, 5000), st.integers(1, 5000))
def test_term_from_sqrt_value(p, q):
    coeff, primes = term_from_sqrt(Fraction(1), Fraction(p, q))
    approx = float(coeff) * math.sqrt(math.prod(primes))
    assert approx == pytest.approx(math.sqrt(p / q), rel=1e-12)
