from __future__ import annotations

from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, strategies as st

from alphahurwitz.exact_arith import (
    GaussianInt,
    GaussianRational,
    format_rational,
    gi_norm,
    gr_reciprocal,
    parse_rational,
)

ints = st.integers(-10**30, 10**30)
rats = st.fractions(max_denominator=10**12)
gints = st.builds(GaussianInt, ints, ints)
grats = st.builds(GaussianRational, rats, rats)


def test_reciprocal_examples():
    assert gr_reciprocal(GaussianRational(1)) == GaussianRational(1)
    assert gr_reciprocal(GaussianRational(0, F(1, 2))) == GaussianRational(0, -2)
    assert gr_reciprocal(GaussianRational(F(2, 5))) == GaussianRational(F(5, 2))


def test_reciprocal_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        gr_reciprocal(GaussianRational(0))


def test_norm_examples():
    assert gi_norm(GaussianInt(0)) == 0
    assert gi_norm(GaussianInt(2)) == 4
    assert gi_norm(GaussianInt(1, 2)) == 5


@given(grats.filter(bool))
def test_reciprocal_is_exact_inverse(z):
    w = gr_reciprocal(z)
    assert z * w == GaussianRational(1)
    assert gr_reciprocal(w) == z


@given(grats.filter(bool))
def test_reciprocal_matches_sympy(z):
    expected = 1 / (sympy.Rational(z.re.numerator, z.re.denominator) + sympy.I * sympy.Rational(z.im.numerator, z.im.denominator))
    re, im = sympy.expand(expected).as_real_imag()
    w = gr_reciprocal(z)
    assert (w.re, w.im) == (F(int(re.p), int(re.q)), F(int(im.p), int(im.q)))


@given(gints, gints)
def test_norm_is_multiplicative(u, v):
    assert gi_norm(u * v) == gi_norm(u) * gi_norm(v)


@given(gints)
def test_norm_is_product_with_conjugate(u):
    p = u * u.conj()
    assert p.im == 0 and p.re == gi_norm(u)


@given(grats, grats, grats)
def test_field_laws(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x - y) + y == x


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6), st.integers(1, 50))
def test_rational_normalization_is_canonical(p, q, k):
    a, b = F(p, q), F(p * k, q * k)
    assert (a.numerator, a.denominator) == (b.numerator, b.denominator)
    assert a.denominator > 0


@given(rats)
def test_rational_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_parse_rational_forms():
    assert parse_rational("3/4") == F(3, 4)
    assert parse_rational("-7") == F(-7)
    assert parse_rational("0.125") == F(1, 8)
    with pytest.raises(ValueError):
        parse_rational("abc")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("2/5", GaussianRational(F(2, 5))),
        ("1/3,-1/2", GaussianRational(F(1, 3), F(-1, 2))),
        ("1/2+1/3i", GaussianRational(F(1, 2), F(1, 3))),
        ("-i", GaussianRational(0, -1)),
    ],
)
def test_gaussian_rational_parse(text, expected):
    assert GaussianRational.parse(text) == expected


@given(grats)
def test_gaussian_rational_string_round_trip(z):
    re, im = z.to_strings()
    assert GaussianRational.parse(f"{re},{im}") == z


def test_values_are_immutable():
    z = GaussianRational(1, 2)
    with pytest.raises(AttributeError):
        z.re = F(3)
    w = GaussianInt(1, 2)
    with pytest.raises(AttributeError):
        w.im = 5


def test_no_overflow_for_huge_values():
    big = GaussianInt(10**200, -(10**199))
    assert gi_norm(big * big) == gi_norm(big) ** 2
