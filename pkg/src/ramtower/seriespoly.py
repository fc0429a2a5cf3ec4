"""Polynomials in one variable with Laurent-series coefficients.

This is the carrier for Newton-polygon input, Eisenstein polynomials and
ramification polynomials.  Resultants are computed as Sylvester determinants
by division-free minor expansion, so precision propagates through +/* only.
"""

from __future__ import annotations

from .errors import InsufficientPrecision
from .fq import FqField
from .series import INF, LaurentSeries, frobenius_twist, parse_series


class SeriesPoly:
    """f(x) = sum coeffs[i] x^i; exact-zero leading coefficients are trimmed."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FqField, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_exact_zero():
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_literals(cls, field: FqField, literals, default_prec: int | None = None):
        """Coefficients as series literals, ascending degree."""
        return cls(field, [parse_series(s, field, default_prec) for s in literals])

    @classmethod
    def from_terms(cls, field: FqField, terms: dict[int, LaurentSeries]):
        if not terms:
            return cls(field, [])
        deg = max(terms)
        row = [LaurentSeries.zero(field)] * (deg + 1)
        for k, c in terms.items():
            row[k] = c
        return cls(field, row)

    @property
    def degree(self) -> int:
        """Degree as stored; the leading coefficient may still be an
        indeterminate zero if it was built from truncated data."""
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> LaurentSeries:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return LaurentSeries.zero(self.field)

    def is_monic(self) -> bool:
        if not self.coeffs:
            return False
        lead = self.coeffs[-1]
        return bool(lead.coeffs) and lead.v0 == 0 and lead.coeffs[0] == 1 and len(lead.coeffs) == 1

    def __eq__(self, other):
        return (
            isinstance(other, SeriesPoly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return SeriesPoly(
            self.field, [self.coeff(i) + other.coeff(i) for i in range(n)]
        )

    def __neg__(self):
        return SeriesPoly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return SeriesPoly(self.field, [c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return SeriesPoly(self.field, [])
        out = [LaurentSeries.zero(self.field)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a.is_exact_zero():
                for j, b in enumerate(other.coeffs):
                    if not b.is_exact_zero():
                        out[i + j] = out[i + j] + a * b
        return SeriesPoly(self.field, out)

    def evaluate(self, x):
        """Horner evaluation at anything that can add/multiply with the
        coefficients (a LaurentSeries, or an element of an extension)."""
        if not self.coeffs:
            return LaurentSeries.zero(self.field)
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return acc

    def twist(self, power: int) -> "SeriesPoly":
        """Coefficient-wise q^e-power Frobenius (power = q^e);
        x-degrees are unchanged, coefficient valuations scale by `power`."""
        return SeriesPoly(self.field, [frobenius_twist(c, power) for c in self.coeffs])

    def __repr__(self):
        from .series import format_series

        inner = ", ".join(format_series(c) for c in self.coeffs)
        return f"SeriesPoly([{inner}])"


def resultant(f: SeriesPoly, g: SeriesPoly) -> LaurentSeries:
    """Sylvester determinant of f and g.

    Rows 0..deg(g)-1 carry the coefficients of f (descending), rows
    deg(g)..deg(g)+deg(f)-1 those of g, each shifted right by the row index
    within its block.  For monic f this equals the product of g over the
    roots of f, hence the norm of g(root).
    """
    n, m = f.degree, g.degree
    if n < 0 or m < 0:
        raise ValueError("resultant of the zero polynomial")
    field = f.field
    if n == 0 and m == 0:
        return LaurentSeries.one(field)
    size = n + m
    zero = LaurentSeries.zero(field)
    rows = []
    fd = list(reversed(f.coeffs))
    gd = list(reversed(g.coeffs))
    for i in range(m):
        rows.append([zero] * i + fd + [zero] * (size - n - 1 - i))
    for i in range(n):
        rows.append([zero] * i + gd + [zero] * (size - m - 1 - i))
    return _det(rows, field)


def _det(rows, field: FqField) -> LaurentSeries:
    """Division-free determinant by minor expansion, memoized on column sets."""
    size = len(rows)
    full = (1 << size) - 1
    memo: dict[int, LaurentSeries] = {0: LaurentSeries.one(field)}

    def minor(mask: int) -> LaurentSeries:
        # mask = set of remaining columns; row index = size - popcount(mask)
        if mask in memo:
            return memo[mask]
        r = size - bin(mask).count("1")
        row = rows[r]
        acc = LaurentSeries.zero(field)
        sign = 1
        rest = mask
        while rest:
            low = rest & (-rest)
            c = low.bit_length() - 1
            entry = row[c]
            if not entry.is_exact_zero():
                sub = minor(mask ^ low)
                term = entry * sub
                acc = acc + (term if sign > 0 else -term)
            sign = -sign
            rest ^= low
        memo[mask] = acc
        return acc

    return minor(full)


def poly_valuations(f: SeriesPoly):
    """[(i, v(a_i))] for the coefficients with decidable valuation; exact
    zeros are omitted, indeterminate zeros raise InsufficientPrecision."""
    pts = []
    for i, c in enumerate(f.coeffs):
        v = c.valuation()  # may raise InsufficientPrecision
        if v != INF:
            pts.append((i, v))
    if not pts:
        raise ValueError("zero polynomial has no Newton polygon")
    return pts
