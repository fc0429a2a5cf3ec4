"""Newton polygons: lower convex hulls of (index, valuation) points.

The polygon of f(x) = sum a_i x^i is the lower convex hull of the points
(i, v(a_i)) with finite valuation.  Each side of slope s and horizontal
length mu certifies exactly mu roots of valuation -s, and the y-intercept of
a side is the data consumed by the ramification-break extraction.

`build_polygon` is a monotone-chain hull; `brute_force_hull` re-derives the
same polygon straight from the definition and exists purely as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .seriespoly import SeriesPoly, poly_valuations


@dataclass(frozen=True)
class Side:
    slope: Fraction
    length: int  # horizontal length
    intercept: Fraction  # y-intercept of the supporting line

    def as_json(self):
        return {
            "slope": format_rat(self.slope),
            "mu": self.length,
            "intercept": format_rat(self.intercept),
        }


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, Fraction], ...]

    @property
    def sides(self) -> tuple[Side, ...]:
        out = []
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            slope = Fraction(y1 - y0, x1 - x0)
            out.append(Side(slope, x1 - x0, y0 - slope * x0))
        return tuple(out)

    def as_json(self):
        return {
            "vertices": [[x, format_rat(y)] for x, y in self.vertices],
            "sides": [s.as_json() for s in self.sides],
        }


def format_rat(r) -> str:
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}" if r.denominator != 1 else str(r.numerator)


def parse_rat(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def _dedupe(points):
    """Keep the lowest y for each x; order by x."""
    best: dict[int, Fraction] = {}
    for x, y in points:
        x = int(x)
        y = Fraction(y)
        if x not in best or y < best[x]:
            best[x] = y
    return sorted(best.items())


def build_polygon(points) -> NewtonPolygon:
    """Lower convex hull by monotone chain; collinear interior points are
    dropped, so the vertex list is canonical.

    >>> build_polygon([(1, 1), (2, 1), (4, 0)]).vertices
    ((1, Fraction(1, 1)), (4, Fraction(0, 1)))
    """
    pts = _dedupe(points)
    if not pts:
        raise ValueError("no points with finite valuation")
    hull: list[tuple[int, Fraction]] = []
    for x, y in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            # drop the middle point if it sits on or above the chord
            if (y1 - y0) * (x - x0) >= (y - y0) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append((x, y))
    return NewtonPolygon(tuple(hull))


def brute_force_hull(points) -> NewtonPolygon:
    """Definition-chasing oracle: a point is a hull vertex iff no segment
    between two other points passes weakly below it, and it is not itself a
    convex combination of its hull neighbours.  O(n^3)."""
    pts = _dedupe(points)
    if not pts:
        raise ValueError("no points with finite valuation")
    if len(pts) == 1:
        return NewtonPolygon((pts[0],))
    on_boundary = []
    for i, (x, y) in enumerate(pts):
        below = False
        for j, (xa, ya) in enumerate(pts):
            if below:
                break
            for k, (xb, yb) in enumerate(pts):
                if j == i or k == i or j >= k:
                    continue
                if xa <= x <= xb and xa < xb:
                    # segment height at x, strictly below y?
                    if (ya * (xb - x) + yb * (x - xa)) < y * (xb - xa):
                        below = True
                        break
        if not below:
            on_boundary.append((x, y))
    # endpoints always survive; remove collinear interior points
    hull = []
    for p in on_boundary:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            if (y1 - y0) * (p[0] - x0) == (p[1] - y0) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append(p)
    return NewtonPolygon(tuple(hull))


def root_valuations(f: SeriesPoly) -> list[tuple[Fraction, int]]:
    """[(valuation, multiplicity)] of the nonzero roots of f in an algebraic
    closure, read off the polygon: a side of slope s and length mu gives mu
    roots of valuation -s.  Roots at zero (trailing zero coefficients) are
    excluded; multiplicities sum to deg f minus the order of vanishing at 0.
    """
    pts = poly_valuations(f)
    np = build_polygon(pts)
    return [(-s.slope, s.length) for s in np.sides]


def y_intercepts(np: NewtonPolygon, nontrivial_only: bool = True) -> list[Fraction]:
    """Y-intercepts of the sides, ascending; by default only sides of
    strictly negative slope ("non-trivial" sides) are reported."""
    out = [
        s.intercept
        for s in np.sides
        if (s.slope < 0 if nontrivial_only else True)
    ]
    return sorted(out)


def polygon_from_json(obj) -> NewtonPolygon:
    return NewtonPolygon(tuple((int(x), parse_rat(y)) for x, y in obj["vertices"]))
