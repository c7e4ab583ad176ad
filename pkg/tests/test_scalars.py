from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_entropy.errors import NotPrime, PadicZeroDivisionError, PrimeMismatch, ScalarParseError
from padic_entropy.scalars import (
    INFINITE,
    PadicScalar,
    format_rational,
    from_rational,
    padic_norm,
    parse_rational,
    valuation,
)

primes = st.sampled_from([2, 3, 5, 7, 11])
rationals = st.fractions(max_denominator=10**6).filter(lambda q: abs(q.numerator) < 10**12)
nonzero = rationals.filter(lambda q: q != 0)


def test_from_rational_examples():
    x = from_rational(Fraction(1, 5), 5)
    assert (x.valuation, x.unit) == (-1, 1)
    z = from_rational(0, 3)
    assert z.valuation == INFINITE and z.unit == 1
    y = from_rational(18, 3)
    assert (y.valuation, y.unit) == (2, 2)


def test_norm_examples():
    assert padic_norm(from_rational(Fraction(1, 5), 5)) == 5
    assert padic_norm(from_rational(0, 5)) == 0
    assert padic_norm(from_rational(18, 3)) == Fraction(1, 9)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_arith_examples(p):
    inv_p = from_rational(Fraction(1, p), p)
    one = inv_p * from_rational(p, p)
    assert one.to_rational() == 1 and one.valuation == 0
    s = from_rational(p, p) + from_rational(p * p, p)
    assert (s.valuation, s.unit) == (1, 1 + p)
    zero = inv_p + (-inv_p)
    assert zero.is_zero() and zero.valuation == INFINITE


def test_errors():
    with pytest.raises(NotPrime):
        PadicScalar.from_rational(1, 4)
    with pytest.raises(PrimeMismatch):
        from_rational(1, 2) + from_rational(1, 3)
    with pytest.raises(PadicZeroDivisionError):
        from_rational(1, 3) / from_rational(0, 3)
    with pytest.raises(ZeroDivisionError):
        from_rational(0, 3).inverse()
    with pytest.raises(ScalarParseError):
        parse_rational("1/0")
    with pytest.raises(ScalarParseError):
        parse_rational("abc")


@pytest.mark.parametrize(
    "text, value",
    [("3", 3), ("-2/6", Fraction(-1, 3)), (" 5^-2 * 3/7 ", Fraction(3, 175)), ("2^3", 8), ("-3^2*1/2", Fraction(-9, 2))],
)
def test_parse_grammar(text, value):
    assert parse_rational(text) == value


def test_canonical_form_rejects_bad_units():
    with pytest.raises(ValueError):
        PadicScalar(3, 1, Fraction(3))


@given(primes, rationals)
def test_round_trip(p, q):
    x = from_rational(q, p)
    assert x.to_rational() == q
    assert from_rational(x.to_rational(), p) == x
    assert PadicScalar.parse(format_rational(q, p), p) == x
    assert parse_rational(str(x)) == q


@given(primes, rationals, rationals)
def test_ultrametric(p, a, b):
    x, y = from_rational(a, p), from_rational(b, p)
    v = (x + y).valuation
    assert v >= min(x.valuation, y.valuation)
    if x.valuation != y.valuation:
        assert v == min(x.valuation, y.valuation)


@given(primes, rationals, rationals)
def test_multiplicativity(p, a, b):
    x, y = from_rational(a, p), from_rational(b, p)
    assert (x * y).valuation == x.valuation + y.valuation
    assert padic_norm(x * y) == padic_norm(x) * padic_norm(y)


@given(primes, nonzero, nonzero)
def test_field_ops_match_rationals(p, a, b):
    x, y = from_rational(a, p), from_rational(b, p)
    assert (x - y).to_rational() == a - b
    assert (x / y).to_rational() == a / b
    assert x.inverse().valuation == -valuation(a, p)
