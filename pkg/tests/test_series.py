"""Laurent-series arithmetic: precision propagation is the interesting part.

A series is "known mod t^P"; every operation must stay honest about what it
knows, and valuation questions that precision cannot answer raise
InsufficientPrecision instead of guessing.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramtower.errors import InsufficientPrecision
from ramtower.fq import fq_field
from ramtower.series import (
    LaurentSeries,
    compose,
    compositional_inverse,
    format_series,
    frobenius_twist,
    parse_series,
)

F2 = fq_field(2)
F4 = fq_field(2, 2)
F9 = fq_field(3, 2)


def s(text, field=F2, prec=None):
    return parse_series(text, field, default_prec=prec)


@st.composite
def series_strategy(draw, field=F9):
    v0 = draw(st.integers(-4, 4))
    coeffs = draw(st.lists(st.integers(0, field.q - 1), min_size=0, max_size=6))
    prec = draw(st.one_of(st.none(), st.integers(v0 + len(coeffs), v0 + 12)))
    terms = {v0 + i: c for i, c in enumerate(coeffs)}
    return LaurentSeries.from_terms(field, terms, prec=prec)


@given(series_strategy(), series_strategy())
@settings(max_examples=200, deadline=None)
def test_add_commutes_and_mul_valuations(a, b):
    assert a + b == b + a
    prod = a * b
    if not a.known_zero() and not b.known_zero():
        assert prod.valuation() == a.valuation() + b.valuation()


@given(series_strategy())
@settings(max_examples=100, deadline=None)
def test_format_parse_round_trip(a):
    assert parse_series(format_series(a), F9) == a


def test_known_vs_exact_zero():
    z = LaurentSeries.zero(F2)
    assert z.is_exact_zero() and z.known_zero()
    fuzzy = LaurentSeries.zero(F2, prec=10)
    assert fuzzy.known_zero() and not fuzzy.is_exact_zero()
    with pytest.raises(InsufficientPrecision):
        fuzzy.valuation()


def test_literal_grammar():
    a = s("t^2*(1 + t) + O(t^10)")
    assert a.valuation() == 2 and a.prec == 10
    # O-term inside a scaled group shifts with the scale
    b = s("t^3*(1 + O(t^2))")
    assert b.prec == 5 and b.valuation() == 3
    c = s("t^-2*(1)", F9)
    assert c.valuation() == -2
    with pytest.raises(ValueError):
        s("t^^2")


def test_precision_propagates_through_product():
    a = s("1 + t + O(t^3)")
    b = s("t^2*(1) + O(t^9)")
    prod = a * b
    # v(b) = 2 shifts a's O(t^3) to O(t^5), tighter than b's own O(t^9)
    assert prod.prec == 5
    assert prod.valuation() == 2


def test_truncate_and_coeff():
    a = s("1 + t + t^3")
    assert a.coeff(3) == 1 and a.coeff(2) == 0
    t = a.truncate(2)
    assert t.prec == 2 and t.coeff(1) == 1


def test_inverse_multiplies_to_one():
    a = s("1 + t + t^2", prec=12)
    inv = a.inverse()
    prod = a * inv
    assert prod.coeff(0) == 1
    assert all(prod.coeff(k) == 0 for k in range(1, 10))
    # shifted unit: valuations negate
    b = s("t^3*(1 + t)", prec=14)
    assert b.inverse().valuation() == -3


def test_inverse_needs_known_leading_term():
    with pytest.raises(InsufficientPrecision):
        LaurentSeries.zero(F2, prec=4).inverse()


def test_pth_power_and_frobenius_twist():
    a = s("1 + t + t^3", F4)
    sq = a.pth_power(1)
    assert sq == a * a
    tw = frobenius_twist(a, 2)
    # twisting exponents: t^k -> t^(2k) on supports, coefficients untouched over F2-coeffs
    assert tw.valuation() == 0 and tw.coeff(2) == 1 and tw.coeff(6) == 1


def test_compose_and_compositional_inverse():
    # f(T) = T + T^2 over F_3; g = f^{-1}; f(g(T)) = T to precision
    field = fq_field(3)
    one = LaurentSeries.one(field)
    coeffs = [LaurentSeries.zero(field), one, one]  # T + T^2
    g = compositional_inverse(coeffs, prec=10)
    t_series = LaurentSeries.t_power(field, 1)
    gf = compose(coeffs, compose(g, t_series, outer_prec=10), outer_prec=10)
    assert gf.coeff(1) == 1
    assert all(gf.coeff(k) == 0 for k in range(2, 10))


def test_scalar_multiplication():
    a = s("t + t^2", F9)
    assert a * 1 == a
    assert (a * 0).known_zero()
    two = F9.from_int(2)
    assert (a * two).coeff(1) == two
