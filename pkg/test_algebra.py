#!/usr/bin/env python3
"""
Exact arithmetic: fields, polynomials, Hasse derivatives, truncated series
"""
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

sys.path.insert(0, '.')
from src.algebra import (
    INFINITY, QQ, CoefficientField, Inconclusive, Polynomial, RationalPoint, TruncatedSeries,
    parse_polynomial, poly_order_at, series_eval,
)
from src.errors import NotExact, ParseError, PrecisionExhausted, PrecisionMismatch

GF2, GF3, GF5 = CoefficientField(2), CoefficientField(3), CoefficientField(5)
XY = ("x", "y")


def P(text, field=QQ, variables=XY):
    return parse_polynomial(text, field, variables)


def S(coefficients, precision, field=QQ):
    return TruncatedSeries.of(field, coefficients, precision)


# ============================================================================
# FIELDS & PARSING
# ============================================================================

def test_field_elements():
    assert QQ.element("1/4") == Fraction(1, 4)
    assert GF5.element("1/2") == 3
    assert GF5.element(-1) == 4
    with pytest.raises(ParseError):
        GF5.element("1/5")
    with pytest.raises(ParseError):
        QQ.element(0.5)


def test_invalid_characteristic():
    for p in (1, 4, 2 ** 16 + 1):
        with pytest.raises(ValueError):
            CoefficientField(p)


def test_parse_and_print():
    f = P("x^2 - y^3")
    assert str(f) == "-y^3 + x^2"
    assert P(str(f)) == f
    assert P("2x*y") == P("2*x*y")
    assert str(P("0")) == "0"


def test_parse_errors():
    with pytest.raises(ParseError):
        P("x^2 - z")
    with pytest.raises(ParseError):
        P("0.5*x")
    with pytest.raises(ParseError):
        P("x^(")


# ============================================================================
# ORDERS, TRANSLATION, HASSE DERIVATIVES
# ============================================================================

def test_order_at_point():
    f = P("x^2 - y^3")
    assert poly_order_at(f, (0, 0)) == 2
    assert poly_order_at(f, (0, 1)) == 0
    assert poly_order_at(P("0"), (3, 4)) is INFINITY


def test_translate():
    x = ("x",)
    assert P("x^2", QQ, x).translate((1,)) == P("x^2 + 2*x + 1", QQ, x)
    assert P("x^2", GF2, x).translate((1,)) == P("x^2 + 1", GF2, x)
    f = P("x^2 - y^3")
    assert f.translate((0, 0)) == f


def _shift_by_substitution(f, point):
    images = [Polynomial.variable(f.field, f.variables, v) + c for v, c in zip(f.variables, point)]
    return f.substitute(images)


def test_translate_high_degree_in_three_variables():
    xyz = ("x", "y", "z")
    f = P("x^7*z^3 - 2*y^5*z + x*y*z^9 - 1/3*z^4", QQ, xyz)
    for point in [(1, 0, -2), ("1/2", 3, 1), (0, 0, 5)]:
        p = RationalPoint.of(QQ, point)
        assert f.translate(p) == _shift_by_substitution(f, p)
    g = P("x^6*y^4 + 2*x*z^5 + y", GF3, xyz)
    p = RationalPoint.of(GF3, (2, 1, 1))
    assert g.translate(p) == _shift_by_substitution(g, p)


def test_hasse_derivatives():
    x = ("x",)
    assert P("x^2", QQ, x).hasse(0, 2) == P("1", QQ, x)
    assert P("x^2", GF2, x).hasse(0, 1).is_zero()
    assert P("x^4", GF2, x).hasse(0, 2).is_zero()
    assert P("x^4", GF2, x).hasse(0, 4) == P("1", GF2, x)
    assert P("x^2 - y^3").hasse_multi((0, 1)) == P("-3*y^2")


def test_chart_pullback_and_division():
    f = P("x^2 - y^3").chart_pullback(1)
    assert f == P("x^2*y^2 - y^3")
    assert f.divide_by_variable_power(1, 2) == P("x^2 - y")
    with pytest.raises(NotExact):
        f.divide_by_variable_power(1, 3)


_fields = st.sampled_from([QQ, GF2, GF3, GF5])
_exponents = st.tuples(st.integers(0, 4), st.integers(0, 4))


@st.composite
def polynomials(draw, field):
    terms = draw(st.dictionaries(_exponents, st.integers(-3, 3), max_size=4))
    return Polynomial(field, XY, terms)


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_order_is_a_valuation(data):
    field = data.draw(_fields)
    f, g = data.draw(polynomials(field)), data.draw(polynomials(field))
    point = data.draw(st.tuples(st.integers(0, 4), st.integers(0, 4)))
    point = RationalPoint.of(field, point)
    nf, ng = poly_order_at(f, point), poly_order_at(g, point)
    product = poly_order_at(f * g, point)
    if nf is INFINITY or ng is INFINITY:
        assert product is INFINITY
    else:
        assert product == nf + ng
    total = poly_order_at(f + g, point)
    assert total is INFINITY or total >= min(nf, ng)


@settings(max_examples=40, deadline=None)
@given(data=st.data(), a=st.integers(1, 3), b=st.integers(1, 3))
def test_hasse_composition(data, a, b):
    field = data.draw(_fields)
    f = data.draw(polynomials(field))
    left = f.hasse(0, b).hasse(0, a)
    right = f.hasse(0, a + b).scale(field.binomial(a + b, a))
    assert left == right


# ============================================================================
# TRUNCATED SERIES
# ============================================================================

def test_series_order():
    assert S([0, 0, 0, 0, 1], 8).order() == 4
    assert S([], 8).order() == Inconclusive(8)
    assert S([3, 1], 8).order() == 0


def test_series_eval_on_the_cusp():
    phi = [S([0, 0, 0, 1], 8), S([0, 0, 1], 8)]
    assert series_eval(P("x^2 - y^3"), phi).is_zero()
    assert series_eval(P("x"), phi).order() == 3
    assert series_eval(P("y^2"), phi) == S([0, 0, 0, 0, 1], 8)
    with pytest.raises(PrecisionMismatch):
        series_eval(P("x"), [S([0, 1], 8), S([0, 1], 6)])


def test_series_division_loses_precision():
    b = S([0, 0, 1, 1], 10)
    a = b * S([2, 5], 10)
    q = a.divide(b)
    assert q.precision == 8
    assert q.coefficients[:2] == (2, 5)
    with pytest.raises(NotExact):
        S([1], 10).divide(b)
    with pytest.raises(PrecisionExhausted):
        S([], 10).divide(S([], 10))


def test_compose_power():
    s = S([0, 0, 1], 12).compose_power(2)
    assert s.precision == 23
    assert s.order() == 4


@settings(max_examples=30, deadline=None)
@given(data=st.data(), n=st.integers(1, 4))
def test_reparametrization_scales_orders(data, n):
    field = data.draw(_fields)
    f = data.draw(polynomials(field))
    phi = [S([0, 0, 0, 1], 10, field), S([0, 0, 1], 10, field)]
    plain = series_eval(f, phi).order()
    scaled = series_eval(f, [s.compose_power(n) for s in phi]).order()
    if not isinstance(plain, Inconclusive):
        assert scaled == n * plain


@settings(max_examples=30, deadline=None)
@given(data=st.data(), shift=st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
def test_series_eval_commutes_with_translation(data, shift):
    field = data.draw(_fields)
    f = data.draw(polynomials(field))
    p = RationalPoint.of(field, shift)
    phi = [S([1, 1, 2], 8, field), S([0, 3, 0, 1], 8, field)]
    moved = [s - c for s, c in zip(phi, p)]
    assert series_eval(f, phi) == series_eval(f.translate(p), moved)


# ============================================================================
# SYMPY AS AN INDEPENDENT ORACLE
# ============================================================================

def _as_sympy(f):
    from sympy import Rational, symbols
    x, y = symbols("x y")
    return sum((Rational(c.numerator, c.denominator) * x ** e[0] * y ** e[1]
                for e, c in f.terms.items()), Rational(0))


@settings(max_examples=30, deadline=None)
@given(data=st.data(), k=st.integers(0, 3))
def test_arithmetic_matches_sympy(data, k):
    from sympy import expand
    f, g = data.draw(polynomials(QQ)), data.draw(polynomials(QQ))
    assert expand(_as_sympy(f * g) - _as_sympy(f) * _as_sympy(g)) == 0
    assert expand(_as_sympy(f - g) - (_as_sympy(f) - _as_sympy(g))) == 0
    assert expand(_as_sympy(f ** k) - _as_sympy(f) ** k) == 0


@settings(max_examples=40, deadline=None)
@given(data=st.data(), shift=st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_translate_matches_substitution(data, shift):
    field = data.draw(_fields)
    f = data.draw(polynomials(field))
    p = RationalPoint.of(field, shift)
    assert f.translate(p) == _shift_by_substitution(f, p)


# ============================================================================
# SERIES PRECISION
# ============================================================================

def test_coefficients_beyond_precision_are_rejected():
    with pytest.raises(PrecisionMismatch):
        S([0, 1, 0, 0, 5], 4)
    assert S([0, 1, 0, 0, 0], 4) == S([0, 1], 4)
    assert TruncatedSeries.of(QQ, [0, 1, 0, 0, 5], 4, truncate=True) == S([0, 1], 4)
    assert TruncatedSeries.parameter(QQ, 1) == S([0], 1)
