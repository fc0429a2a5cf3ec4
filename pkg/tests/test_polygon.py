import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramtower.fq import fq_field
from ramtower.polygon import (
    NewtonPolygon,
    brute_force_hull,
    build_polygon,
    format_rat,
    parse_rat,
    polygon_from_json,
    root_valuations,
    y_intercepts,
)
from ramtower.series import LaurentSeries
from ramtower.seriespoly import SeriesPoly

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=48
)
point_sets = st.lists(
    st.tuples(st.integers(min_value=0, max_value=80), rationals),
    min_size=1,
    max_size=64,
)


@given(point_sets)
@settings(max_examples=300, deadline=None)
def test_hull_matches_brute_force(pts):
    assert build_polygon(pts) == brute_force_hull(pts)


@given(point_sets)
@settings(max_examples=100, deadline=None)
def test_hull_slopes_strictly_increase(pts):
    sides = build_polygon(pts).sides
    for a, b in zip(sides, sides[1:]):
        assert a.slope < b.slope


@given(point_sets)
@settings(max_examples=100, deadline=None)
def test_hull_lies_under_all_points(pts):
    np_ = build_polygon(pts)
    vs = np_.vertices
    for x, y in pts:
        # points inside the x-range must sit on or above the hull
        for (x0, y0), (x1, y1) in zip(vs, vs[1:]):
            if x0 <= x <= x1:
                lhs = (y - y0) * (x1 - x0)
                rhs = (y1 - y0) * (x - x0)
                assert lhs >= rhs


def test_worked_example():
    np_ = build_polygon([(1, 1), (2, 1), (4, 0)])
    assert np_.vertices == ((1, Fraction(1)), (4, Fraction(0)))
    (side,) = np_.sides
    assert side.slope == Fraction(-1, 3)
    assert side.length == 3


def test_duplicate_abscissa_keeps_lowest():
    np_ = build_polygon([(0, 5), (0, 2), (3, 0), (3, 7)])
    assert np_.vertices == ((0, Fraction(2)), (3, Fraction(0)))


def _split_poly(field, rng, k):
    """Product of (x - u*t^m) factors with planted integer valuations."""
    planted = []
    f = SeriesPoly(field, [LaurentSeries.one(field)])
    for _ in range(k):
        m = rng.randint(0, 9)
        u = rng.randrange(1, field.q)
        root = LaurentSeries.t_power(field, m, coeff=u)
        factor = SeriesPoly(field, [root * -1, LaurentSeries.one(field)])
        f = f * factor
        planted.append(m)
    return f, planted


@pytest.mark.parametrize("q", [2, 3, 4])
def test_root_valuations_recover_planted_multiset(q):
    p = 2 if q in (2, 4) else 3
    field = fq_field(p, 2 if q == 4 else 1)
    rng = random.Random(q)
    for _ in range(40):
        f, planted = _split_poly(field, rng, rng.randint(1, 6))
        got = []
        for val, mult in root_valuations(f):
            assert val.denominator == 1
            got.extend([int(val)] * mult)
        assert sorted(got) == sorted(planted)


def test_root_valuations_merge_under_product():
    field = fq_field(2)
    rng = random.Random(7)
    f, pf = _split_poly(field, rng, 3)
    g, pg = _split_poly(field, rng, 4)
    combined = []
    for val, mult in root_valuations(f * g):
        combined.extend([val] * mult)
    assert sorted(combined) == sorted([Fraction(v) for v in pf + pg])


def test_y_intercepts_sorted_and_positive_slopes_dropped():
    np_ = build_polygon([(0, 3), (1, 1), (2, 0), (3, 2)])
    ys = y_intercepts(np_)
    assert ys == sorted(ys)
    assert all(b > 0 for b in ys)
    # the flat/rising tail contributes nothing
    assert y_intercepts(build_polygon([(0, 0), (2, 1)])) == []


def test_json_round_trip():
    np_ = build_polygon([(0, Fraction(7, 2)), (1, 1), (5, 0)])
    again = polygon_from_json(np_.as_json())
    assert again == np_


def test_rat_string_round_trip():
    for x in (Fraction(7, 2), Fraction(-3), Fraction(0), Fraction(22, 7)):
        assert parse_rat(format_rat(x)) == x
