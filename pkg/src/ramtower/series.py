"""Truncated Laurent series over a finite field, with absolute precision.

A series is a finite table of known coefficients plus an optional absolute
precision P, meaning "known modulo t^P".  Operations propagate precision
pessimistically and never fabricate digits; a question that the known digits
cannot answer raises InsufficientPrecision instead of guessing.

The zero series comes in two flavours: exact zero (precision None, valuation
+infinity) and "zero modulo t^P", whose valuation is undecidable.
"""

from __future__ import annotations

import math
import re

from .errors import FieldMismatch, InsufficientPrecision
from .fq import FqElem, FqField

INF = math.inf


class LaurentSeries:
    __slots__ = ("field", "v0", "coeffs", "prec")

    def __init__(self, field: FqField, v0: int, coeffs: tuple[FqElem, ...], prec: int | None):
        # normalize: strip leading/trailing zero coefficients, clamp to precision
        lo = 0
        hi = len(coeffs)
        while lo < hi and not coeffs[lo]:
            lo += 1
        v0 += lo
        if prec is not None:
            hi = min(hi, lo + max(0, prec - v0))
        while hi > lo and not coeffs[hi - 1]:
            hi -= 1
        coeffs = coeffs[lo:hi]
        if not coeffs:
            v0 = 0
        self.field = field
        self.v0 = v0
        self.coeffs = coeffs
        self.prec = prec

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_terms(cls, field: FqField, terms: dict[int, FqElem | int], prec: int | None = None):
        if not terms:
            return cls(field, 0, (), prec)
        lo = min(terms)
        hi = max(terms) + 1
        row = [field.zero()] * (hi - lo)
        for e, c in terms.items():
            row[e - lo] = field.from_int(c) if isinstance(c, int) else c
        return cls(field, lo, tuple(row), prec)

    @classmethod
    def zero(cls, field: FqField, prec: int | None = None):
        return cls(field, 0, (), prec)

    @classmethod
    def one(cls, field: FqField, prec: int | None = None):
        return cls.from_terms(field, {0: 1}, prec)

    @classmethod
    def t_power(cls, field: FqField, k: int, coeff: int | FqElem = 1, prec: int | None = None):
        return cls.from_terms(field, {k: coeff}, prec)

    # -- structure ---------------------------------------------------------

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.prec is None

    def known_zero(self) -> bool:
        return not self.coeffs

    def valuation(self):
        """Exact valuation, +inf for the exact zero series.

        Raises InsufficientPrecision when all known digits vanish but the
        precision is finite.
        """
        if self.coeffs:
            return self.v0
        if self.prec is None:
            return INF
        raise InsufficientPrecision(f"series is 0 mod t^{self.prec}; valuation unknown")

    def valuation_lower_bound(self):
        if self.coeffs:
            return self.v0
        return INF if self.prec is None else self.prec

    def coeff(self, e: int) -> FqElem:
        """Coefficient of t^e; raises if e is beyond the known precision."""
        if self.prec is not None and e >= self.prec:
            raise InsufficientPrecision(f"coefficient of t^{e} unknown (precision {self.prec})")
        if self.v0 <= e < self.v0 + len(self.coeffs):
            return self.coeffs[e - self.v0]
        return self.field.zero()

    def terms(self):
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.v0 + i, c

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.v0 == other.v0
            and self.coeffs == other.coeffs
            and self.prec == other.prec
        )

    def __hash__(self):
        return hash((self.field, self.v0, self.coeffs, self.prec))

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, FqElem)):
            other = LaurentSeries.from_terms(self.field, {0: other})
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        self._check(other)
        prec = _min_prec(self.prec, other.prec)
        if not self.coeffs:
            return LaurentSeries(other.field, other.v0, other.coeffs, prec)
        if not other.coeffs:
            return LaurentSeries(self.field, self.v0, self.coeffs, prec)
        lo = min(self.v0, other.v0)
        hi = max(self.v0 + len(self.coeffs), other.v0 + len(other.coeffs))
        row = [self.field.zero()] * (hi - lo)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                row[s.v0 + i - lo] = row[s.v0 + i - lo] + c
        return LaurentSeries(self.field, lo, tuple(row), prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.field, self.v0, tuple(-c for c in self.coeffs), self.prec)

    def __sub__(self, other):
        if isinstance(other, (int, FqElem)):
            other = LaurentSeries.from_terms(self.field, {0: other})
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, FqElem)):
            c = self.field.from_int(other) if isinstance(other, int) else other
            return LaurentSeries(self.field, self.v0, tuple(a * c for a in self.coeffs), self.prec)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        self._check(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return LaurentSeries.zero(self.field)
        prec = _min_prec(
            _shift_prec(self.prec, other.valuation_lower_bound()),
            _shift_prec(other.prec, self.valuation_lower_bound()),
        )
        if not self.coeffs or not other.coeffs:
            return LaurentSeries.zero(self.field, prec)
        zero = self.field.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return LaurentSeries(self.field, self.v0 + other.v0, tuple(out), prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, FqElem)):
            c = self.field.from_int(other) if isinstance(other, int) else other
            return self * c.inverse()
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self * other.inverse()

    def shift(self, k: int):
        """Multiply by t^k."""
        return LaurentSeries(
            self.field, self.v0 + k, self.coeffs, None if self.prec is None else self.prec + k
        )

    def truncate(self, prec: int):
        return LaurentSeries(self.field, self.v0, self.coeffs, _min_prec(self.prec, prec))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use inverse() for negative powers")
        p = self.field.p
        # peel off p-power part exactly (freshman's dream in characteristic p)
        k = 0
        while n and n % p == 0:
            n //= p
            k += 1
        base = self.pth_power(k) if k else self
        result = LaurentSeries.one(self.field)
        acc = base
        while n:
            if n & 1:
                result = result * acc
            acc = acc * acc
            n >>= 1
        return result

    def pth_power(self, k: int):
        """The p^k-th power: exponents scale by p^k, coefficients are raised
        to the p^k, and so does the absolute precision."""
        if k == 0:
            return self
        s = self.field.p**k
        terms = {e * s: c ** (self.field.p**k) for e, c in self.terms()}
        prec = None if self.prec is None else self.prec * s
        return LaurentSeries.from_terms(self.field, terms, prec)

    def inverse(self, prec: int | None = None):
        """Multiplicative inverse.

        For a truncated input known mod t^P with valuation v the result is
        known mod t^(P-2v); `prec` may cap that further.  An exact input needs
        an explicit absolute `prec` since the inverse is an infinite series.
        """
        v = self.valuation()
        if v is INF:
            raise ZeroDivisionError("inverse of zero series")
        if self.prec is None:
            nonzero = [c for c in self.coeffs if c]
            if len(nonzero) == 1 and prec is None:
                # monomial: the inverse is again an exact monomial
                return LaurentSeries(self.field, -v, (nonzero[0].inverse(),), None)
            if prec is None:
                raise ValueError("exact series: pass prec (absolute) for the inverse")
            out_prec = prec
        else:
            out_prec = self.prec - 2 * v
            if prec is not None:
                out_prec = min(out_prec, prec)
        n_terms = out_prec + v  # digits of (1+e)^(-1), exponents 0 .. n_terms-1
        if n_terms <= 0:
            raise InsufficientPrecision("not enough digits to invert")
        u = self.coeffs[0].inverse()
        # e = tail of self over its leading term; r = (1+e)^(-1) by recurrence
        e = [self.field.zero()] * n_terms
        for i, c in enumerate(self.coeffs[1:], start=1):
            if i < n_terms:
                e[i] = c * u
        r = [self.field.zero()] * n_terms
        r[0] = self.field.one()
        for n in range(1, n_terms):
            acc = self.field.zero()
            for k in range(1, n + 1):
                if e[k]:
                    acc = acc + e[k] * r[n - k]
            r[n] = -acc
        return LaurentSeries(self.field, -v, tuple(c * u for c in r), out_prec)

    def __repr__(self):
        return f"LaurentSeries({format_series(self)!r})"


def _min_prec(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _shift_prec(p: int | None, v) -> int | None:
    if p is None or v is INF:
        return None
    return int(p + v)


def frobenius_twist(s: LaurentSeries, power: int) -> LaurentSeries:
    """Raise a series to a power of p given as the literal power (q, q^2, ...).

    In characteristic p this is coefficient-wise Frobenius plus exponent
    scaling, so valuations scale exactly by `power`.
    """
    p = s.field.p
    k = 0
    n = power
    while n > 1:
        if n % p:
            raise ValueError("power must be a power of the characteristic")
        n //= p
        k += 1
    return s.pth_power(k)


def compose(outer: list[LaurentSeries], inner: LaurentSeries, outer_prec: int | None = None):
    """Evaluate sum(outer[k] * inner^k).

    `outer` is a polynomial in T with series coefficients; if `outer_prec` is
    given the outer series is only known modulo T^outer_prec, which caps the
    result at t^(v(inner)*outer_prec).  Requires v(inner) >= 1 whenever the
    outer part is not a polynomial.
    """
    if not outer:
        return LaurentSeries.zero(inner.field, None)
    v = inner.valuation_lower_bound()
    if outer_prec is not None and v < 1:
        raise ValueError("composition needs v(inner) >= 1 for a truncated outer series")
    result = LaurentSeries.zero(inner.field)
    power = LaurentSeries.one(inner.field)
    for k, c in enumerate(outer):
        if k:
            power = power * inner
        if not c.is_exact_zero():
            result = result + c * power
    if outer_prec is not None:
        cap = outer_prec * v
        if cap is not INF:
            result = result.truncate(int(cap))
    return result


def compositional_inverse(coeffs: list, prec: int) -> list:
    """Inverse under composition of f = sum(coeffs[k] T^k), generic in the
    coefficient ring (exact rationals, field elements, ...).

    coeffs[0] must be zero and coeffs[1] invertible.  Returns the coefficient
    list of g with f(g(T)) = T modulo T^prec.
    """
    if len(coeffs) < 2:
        raise ValueError("need at least a linear coefficient")
    zero = coeffs[1] * 0
    one = coeffs[1] / coeffs[1]
    if coeffs[0] != zero:
        raise ValueError("constant term must vanish")
    inv1 = one / coeffs[1]
    g = [zero] * prec
    if prec <= 1:
        return g
    g[1] = inv1
    for n in range(2, prec):
        # residual: coefficient of T^n in f(g) with g[n] still zero
        fg = _poly_eval_trunc(coeffs, g, n + 1, zero)
        g[n] = -fg[n] * inv1
    return g


def _poly_eval_trunc(coeffs: list, g: list, cut: int, zero) -> list:
    """f(g) truncated at T^cut for polynomial coefficient lists."""
    result = [zero] * cut
    power = [zero] * cut
    power[0] = coeffs[1] / coeffs[1]  # one
    for k, c in enumerate(coeffs):
        if k:
            power = _poly_mul_trunc(power, g, cut, zero)
        if c != zero:
            for i, a in enumerate(power):
                if a != zero:
                    result[i] = result[i] + c * a
    return result


def _poly_mul_trunc(a: list, b: list, cut: int, zero) -> list:
    out = [zero] * cut
    for i, x in enumerate(a):
        if i >= cut:
            break
        if x != zero:
            for j, y in enumerate(b):
                if i + j >= cut:
                    break
                if y != zero:
                    out[i + j] = out[i + j] + x * y
    return out


# -- literal parsing -------------------------------------------------------

_TOKEN = re.compile(r"\s*(\d+|[tO()^*+-])")


def parse_series(text: str, field: FqField, default_prec: int | None = None) -> LaurentSeries:
    """Parse a series literal like `t^2*(1 + 2*t) + O(t^10)`.

    Integer coefficients are reduced into F_q through the base-p digit map.
    `O(t^P)` contributes a zero-known series of absolute precision P; scaling
    by t^k shifts it, so `t^3*(1 + O(t^2))` means t^3 + O(t^5).  Exponents may
    be negative.  When the literal has no O-term the result is exact unless
    `default_prec` is given.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"bad series literal near {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    parser = _Parser(tokens, field)
    s = parser.parse_sum()
    if parser.pos != len(tokens):
        raise ValueError(f"trailing tokens in series literal: {tokens[parser.pos:]}")
    if s.prec is None and default_prec is not None:
        s = s.truncate(default_prec)
    return s


class _Parser:
    def __init__(self, tokens, field):
        self.tokens = tokens
        self.field = field
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expect=None):
        tok = self.peek()
        if tok is None or (expect is not None and tok != expect):
            raise ValueError(f"expected {expect!r}, got {tok!r}")
        self.pos += 1
        return tok

    def parse_sum(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        s = self.parse_product() * sign
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.parse_product()
            s = s + rhs if op == "+" else s - rhs
        return s

    def parse_product(self):
        s = self.parse_atom()
        while self.peek() == "*":
            self.take("*")
            s = s * self.parse_atom()
        return s

    def parse_atom(self):
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of series literal")
        if tok == "(":
            self.take("(")
            s = self.parse_sum()
            self.take(")")
            return s
        if tok == "O":
            self.take("O")
            self.take("(")
            self.take("t")
            self.take("^")
            e = self._signed_int()
            self.take(")")
            return LaurentSeries.zero(self.field, e)
        if tok == "t":
            self.take("t")
            e = 1
            if self.peek() == "^":
                self.take("^")
                e = self._signed_int()
            return LaurentSeries.t_power(self.field, e)
        if tok.isdigit():
            self.take()
            return LaurentSeries.from_terms(self.field, {0: int(tok)})
        raise ValueError(f"unexpected token {tok!r} in series literal")

    def _signed_int(self):
        neg = False
        if self.peek() == "-":
            self.take("-")
            neg = True
        tok = self.take()
        if not tok.isdigit():
            raise ValueError(f"expected integer, got {tok!r}")
        return -int(tok) if neg else int(tok)


def format_series(s: LaurentSeries) -> str:
    """Canonical literal for a series; parse_series round-trips it."""
    parts = []
    if s.coeffs:
        inner = []
        for i, c in enumerate(s.coeffs):
            if not c:
                continue
            n = c.to_int()
            e = s.v0 + i
            if e == 0:
                inner.append(str(n))
            elif e == 1:
                inner.append("t" if n == 1 else f"{n}*t")
            else:
                inner.append(f"t^{e}" if n == 1 else f"{n}*t^{e}")
        parts.append(" + ".join(inner))
    if s.prec is not None:
        parts.append(f"O(t^{s.prec})")
    if not parts:
        return "0"
    return " + ".join(parts)
