"""Exact number tower: squarefree radicands, surd sums, rendering."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotinv.exactnum import (
    ComplexSurd,
    SurdSum,
    double_factorial,
    format_complex,
    format_ratio,
    format_single_surd,
    format_surd,
    parse_ratio,
    squarefree_split,
    surd_mul,
)


def test_squarefree_split():
    assert squarefree_split(1) == (1, 1)
    assert squarefree_split(72) == (6, 2)
    assert squarefree_split(60) == (2, 15)
    assert squarefree_split(210) == (1, 210)
    with pytest.raises(ValueError):
        squarefree_split(0)


def test_double_factorial_conventions():
    assert double_factorial(-1) == 1
    assert double_factorial(0) == 1
    assert double_factorial(7) == 105
    assert double_factorial(8) == 384


def test_sqrt_of_rational_is_canonical():
    s = SurdSum.sqrt_of(Fraction(1, 5))
    assert s.single_term() == (Fraction(1, 5), 5)
    assert s.square_value() == Fraction(1, 5)
    assert SurdSum.sqrt_of(12) == SurdSum({3: 2})
    assert SurdSum.sqrt_of(Fraction(2, 3), sign=-1).sign() == -1


def test_surd_products_collapse():
    r2 = SurdSum.sqrt_of(2)
    r3 = SurdSum.sqrt_of(3)
    assert r2 * r2 == 2
    assert r2 * r3 == SurdSum.sqrt_of(6)
    assert (r2 + r3) * (r2 - r3) == -1
    assert (r2 + 1).is_single() is False
    assert (r2 * r2).is_rational()


def test_parse_and_format_ratio():
    assert parse_ratio("3/4") == Fraction(3, 4)
    assert parse_ratio(" -7 ") == -7
    assert format_ratio(3) == "3/1"
    assert format_ratio(Fraction(-2, 6)) == "-1/3"
    with pytest.raises(ValueError):
        parse_ratio("x/2")
    with pytest.raises(ValueError):
        parse_ratio("1/0")


@pytest.mark.parametrize(
    "square, text",
    [
        (Fraction(1, 5), "1/sqrt(5)"),
        (Fraction(3, 10), "sqrt(3/10)"),
        (Fraction(5), "sqrt(5)"),
        (Fraction(5, 9), "sqrt(5)/3"),
        (Fraction(4, 105), "2/sqrt(105)"),
        (Fraction(1, 4), "1/2"),
        (Fraction(1), "1"),
    ],
)
def test_format_single_surd_matches_table_style(square, text):
    c, m = SurdSum.sqrt_of(square).single_term()
    assert format_single_surd(c, m) == text
    assert format_single_surd(-c, m) == "-" + text


def test_format_single_surd_latex():
    c, m = SurdSum.sqrt_of(Fraction(1, 5)).single_term()
    assert format_single_surd(c, m, latex=True) == "\\frac{1}{\\sqrt{5}}"
    c, m = SurdSum.sqrt_of(Fraction(3, 10)).single_term()
    assert format_single_surd(c, m, latex=True) == "\\sqrt{\\frac{3}{10}}"


def test_format_surd_and_complex():
    assert format_surd(SurdSum()) == "0"
    assert format_surd(SurdSum.sqrt_of(2) - 1) == "-1 + sqrt(2)"
    assert format_complex(ComplexSurd.imag(SurdSum.sqrt_of(Fraction(1, 6)))) == "i/sqrt(6)"
    assert format_complex(ComplexSurd.real(1)) == "1"
    assert format_complex(ComplexSurd(SurdSum.rational(Fraction(1, 2)), SurdSum.sqrt_of(Fraction(3, 4)))) == (
        "1/2 + i*sqrt(3)/2"
    )


def test_complex_surd_arithmetic():
    i = ComplexSurd.imag(1)
    assert i * i == ComplexSurd.real(-1)
    assert (i + ComplexSurd.real(2)).conjugate() == ComplexSurd.real(2) - i
    assert complex(ComplexSurd.imag(SurdSum.sqrt_of(4))) == 2j


_surds = st.dictionaries(
    st.sampled_from([1, 2, 3, 5, 6, 10]),
    st.fractions(min_value=-10, max_value=10, max_denominator=12),
    max_size=3,
).map(SurdSum)


@settings(max_examples=1000)
@given(_surds, _surds, _surds)
def test_surd_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b - b == a
    assert a * b == b * a


@given(_surds)
def test_float_conversion_tracks_exact_value(a):
    assert float(a * a) == pytest.approx(float(a) ** 2, rel=1e-9, abs=1e-9)


def test_surd_mul_resplits_radicands():
    assert surd_mul(SurdSum.sqrt_of(6), SurdSum.sqrt_of(10)) == SurdSum({15: 2})
    one_plus = SurdSum({1: 1, 3: 1})
    one_minus = SurdSum({1: 1, 3: -1})
    assert surd_mul(one_plus, one_minus) == -2
    assert surd_mul(SurdSum.sqrt_of(2), SurdSum()).is_zero()
