import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dioexp.errors import ParseError
from dioexp.scalars import (
    RealScalar,
    cf_exponent,
    continued_fraction,
    parse_matrix,
    parse_scalar,
    parse_vector,
    to_text,
)


def test_enclose_rational_is_exact():
    lo, hi = RealScalar.rational(1, 3).enclose(10)
    assert lo <= Fraction(1, 3) <= hi and hi - lo <= Fraction(1, 2 ** 10)


def test_enclose_golden():
    lo, hi = RealScalar.golden().enclose(53)
    assert hi - lo <= Fraction(1, 2 ** 53)
    # integer square root oracle: phi = (1 + sqrt 5)/2
    s = math.isqrt(5 * 4 ** 80)
    assert lo <= Fraction(2 ** 80 + s, 2 ** 81) + Fraction(1, 2 ** 80)
    assert hi >= Fraction(2 ** 80 + s, 2 ** 81)


def test_enclose_liouville_partial_sum():
    x = RealScalar.liouville(10, 5, 6)
    lo, hi = x.enclose(64)
    # first three terms already fix the value to 1e-150
    head = Fraction(1, 10) + Fraction(1, 10 ** 6) + Fraction(1, 10 ** 36)
    assert abs(lo - head) < Fraction(1, 10 ** 19)
    assert hi - lo <= Fraction(1, 2 ** 64)


def test_cf_golden():
    cf = continued_fraction(RealScalar.golden(), 5)
    assert cf.quotients == [1, 1, 1, 1, 1]
    assert cf.convergents == [(1, 1), (2, 1), (3, 2), (5, 3), (8, 5)]


def test_cf_rational_terminates():
    cf = continued_fraction(RealScalar.rational(22, 7), 10)
    assert cf.quotients == [3, 7] and cf.terminated


def test_cf_sqrt2():
    cf = continued_fraction(RealScalar.sqrt(2), 4)
    assert cf.quotients == [1, 2, 2, 2]
    assert cf.convergents[-1] == (17, 12)


def test_cf_exponent_examples():
    assert abs(cf_exponent(RealScalar.golden(), 30) - 1) <= 0.05
    assert abs(cf_exponent(RealScalar.sqrt(2), 30) - 1) <= 0.05
    assert abs(cf_exponent(RealScalar.liouville(10, 5), 40) - 5) <= 0.5


@pytest.mark.parametrize("text", ["3/7", "-2", "0.125", "phi", "sqrt:3", "-sqrt:2",
                                  "quad:1/2:-3:7", "liouville:10:5", "liouville:2:3:8"])
def test_grammar_round_trip(text):
    x = parse_scalar(text)
    y = parse_scalar(to_text(x))
    assert x.enclose(40) == y.enclose(40)


def test_json_round_trip():
    for x in (RealScalar.golden(), RealScalar.liouville(10, 4), RealScalar.rational(-5, 3)):
        assert RealScalar.from_json(x.to_json()).enclose(60) == x.enclose(60)


@pytest.mark.parametrize("bad", ["", "sqrt:", "liouville:10", "1/0", "dec:abc", "banana"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_scalar(bad)


def test_vector_and_matrix():
    assert len(parse_vector("phi, 1/3 ,sqrt:2")) == 3
    m = parse_matrix("1,2;3,4;5,6")
    assert [len(r) for r in m] == [2, 2, 2]
    with pytest.raises(ParseError):
        parse_matrix("1,2;3")


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(1, 10 ** 6))
def test_rational_enclosure_contains(p, q):
    lo, hi = RealScalar.rational(p, q).enclose(30)
    assert lo <= Fraction(p, q) <= hi


def test_decimal_keeps_declared_error():
    x = parse_scalar("dec:1.4142±2^-12")
    lo, hi = x.enclose(11)
    assert lo <= Fraction(14142, 10000) <= hi
    assert parse_scalar(to_text(x)).enclose(11) == (lo, hi)
