"""Ramification breaks of Eisenstein layers via the twisted polygon."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramtower.errors import InsufficientPrecision
from ramtower.fq import fq_field
from ramtower.jsonio import tate_breaks_from_json
from ramtower.series import LaurentSeries
from ramtower.seriespoly import SeriesPoly
from ramtower.tate import (
    EisensteinExtension,
    check_tate_hypothesis,
    closed_form_break,
    eisenstein_trinomial,
    ext_valuation,
    ramification_polynomial,
    tate_breaks,
)


def _ext(field, literals, **kw):
    return EisensteinExtension(SeriesPoly.from_literals(field, literals), **kw)


def test_quadratic_worked_example():
    # x^2 + t·x + t over F_2((t)): one wild break at 1
    f2 = fq_field(2)
    ext = _ext(f2, ["t", "t", "1"])
    result = tate_breaks(ext)
    assert result.points == ((1, 1), (2, 0))
    assert result.breaks == (Fraction(1),)
    assert result.hypothesis.ok and result.hypothesis.p_power_degree


def test_closed_form_break_values():
    assert closed_form_break(2, 1) == 1
    assert closed_form_break(4, 1) == Fraction(1, 3)
    assert closed_form_break(3, 3) == Fraction(7, 2)
    with pytest.raises(ValueError):
        closed_form_break(1, 1)
    with pytest.raises(ValueError):
        closed_form_break(2, 0)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("c", [1, 2, 3])
def test_trinomial_break_matches_closed_form(p, c):
    ext = eisenstein_trinomial(fq_field(p), c)
    result = tate_breaks(ext)
    assert result.breaks == (closed_form_break(p, c),)
    assert result.breaks == (Fraction(p * c, p - 1) - 1,)


def test_non_prime_residue_field():
    # x^4 + t·x + t over F_4((t)): break 1/3
    ext = eisenstein_trinomial(fq_field(2, 2), 1)
    assert tate_breaks(ext).breaks == (Fraction(1, 3),)


def test_tame_layer_has_no_wild_breaks():
    # degree 2 is prime to p = 3; the polygon side is not negative
    f3 = fq_field(3)
    ext = _ext(f3, ["t", "t^2", "1"])
    result = tate_breaks(ext)
    assert result.breaks == ()
    assert not result.hypothesis.p_power_degree


def test_hypothesis_witness():
    # x^3 + t·x^2 + t^2·x + t over F_3: v(a_2) = 1 < v(a_1) = 2
    f3 = fq_field(3)
    ext = _ext(f3, ["t", "t^2", "t", "1"])
    rep = check_tate_hypothesis(ext)
    assert not rep.ok
    assert rep.witness == (2, 1, 2)
    assert rep.p_power_degree and rep.degree_log == 1


def test_extension_arithmetic():
    f2 = fq_field(2)
    ext = eisenstein_trinomial(f2, 1)
    alpha = ext.alpha()
    assert ext_valuation(alpha) == 1
    t = LaurentSeries.t_power(f2, 1, prec=12)
    assert ext_valuation(ext.from_base(t)) == ext.n
    # alpha^2 = t·alpha + t in this quotient, so alpha·(alpha + t) = t
    prod = alpha * (alpha + ext.from_base(t))
    diff = prod - ext.from_base(t)
    assert diff.is_known_zero()


def test_eisenstein_validation():
    f2 = fq_field(2)
    with pytest.raises(ValueError):
        _ext(f2, ["t^2", "t", "1"])  # constant term valuation 2
    with pytest.raises(ValueError):
        _ext(f2, ["t", "1", "1"])  # interior coefficient is a unit
    with pytest.raises(ValueError):
        _ext(f2, ["t", "1"])  # degree 1
    with pytest.raises(ValueError):
        _ext(f2, ["t", "t", "t"])  # not monic


def test_assume_totally_ramified_flag():
    f2 = fq_field(2)
    with pytest.raises(ValueError):
        _ext(f2, ["t^2", "t", "1"])
    ext = _ext(f2, ["t^2", "t", "1"], assume_totally_ramified=True)
    assert ext.assumed
    # on a genuinely Eisenstein input the flag changes nothing
    plain = tate_breaks(_ext(f2, ["t", "t", "1"]))
    flagged = tate_breaks(_ext(f2, ["t", "t", "1"], assume_totally_ramified=True))
    assert plain.breaks == flagged.breaks


def test_fuzzy_coefficient_raises_precision_error():
    # linear coefficient known only as O(t^3): its valuation is undetermined
    f2 = fq_field(2)
    with pytest.raises(InsufficientPrecision):
        _ext(f2, ["t", "O(t^3)", "1"])


def test_ramification_points_shift():
    # quartic over F_2: the i-th ordinate is v_L(b_i) - n
    f2 = fq_field(2)
    ext = eisenstein_trinomial(f2, 2, prec=64)  # x^2 + t^2 x + t
    pts = ramification_polynomial(ext)
    assert pts == [(1, 3), (2, 0)]
    assert tate_breaks(ext).breaks == (Fraction(3),)


def test_json_round_trip():
    ext = eisenstein_trinomial(fq_field(3), 1)
    result = tate_breaks(ext)
    again = tate_breaks_from_json(result.as_json())
    assert again.breaks == result.breaks
    assert again.points == result.points
    assert again.polygon == result.polygon
    assert again.hypothesis == result.hypothesis


small_trinomials = st.tuples(
    st.sampled_from([(2, 1), (2, 2), (3, 1)]),
    st.integers(1, 3),
    st.integers(1, 3),
)


@given(small_trinomials)
@settings(max_examples=40, deadline=None)
def test_trinomial_break_closed_form_generic(case):
    (p, m), c, unit_seed = case
    field = fq_field(p, m)
    q = field.q
    unit = unit_seed % (q - 1) + 1 if q > 2 else 1
    ext = eisenstein_trinomial(field, c, unit=unit, lin_unit=unit)
    result = tate_breaks(ext)
    assert result.breaks == (closed_form_break(q, c),)
