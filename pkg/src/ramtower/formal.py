"""Formal group laws and formal modules, truncated at a total degree.

The centerpiece is the functional-equation construction: a logarithm
f(x) = Σ b_i x^{q^i} with b_0 = 1 and

    p·b_n = Σ_{k=0}^{n-1} b_k · v_{n-k}^{q^k},

first with the v's as symbols (the universal coefficients), then specialized
to p-integral rational values.  The group law is F(x, y) = f^{-1}(f(x)+f(y))
and the brackets are [a](T) = f^{-1}(a·f(T)); the functional-equation lemma
guarantees every coefficient is p-integral even though each b_n has p-power
denominators, and that integrality is asserted, not assumed.

All character-zero staging uses exact rationals.  Hot loops (composing the
inverse logarithm with a sparse series at large truncation) run on plain
integers at a fixed common p-power scale; every descaling division is
remainder-checked, so a bookkeeping bug raises instead of corrupting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .errors import FieldMismatch, IntegralityError
from .fq import FqField, fq_field
from .series import LaurentSeries
from .seriespoly import SeriesPoly

RATIONALS = "Q"


def _vp(x: Fraction, p: int):
    """p-adic valuation of a rational; None for 0."""
    x = Fraction(x)
    if not x:
        return None
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _den_exp(x: Fraction, p: int, what="coefficient") -> int:
    """Exponent e with denominator(x) = p^e; any other prime factor is an
    integrality violation."""
    den = x.denominator
    e = 0
    while den % p == 0:
        den //= p
        e += 1
    if den != 1:
        raise IntegralityError(f"{what} has non-{p}-power denominator {x.denominator}")
    return e


# ---------------------------------------------------------------------------
# universal coefficients


class QPoly:
    """Polynomial in v_1..v_k with exact rational coefficients."""

    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms=None):
        self.k = k
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def const(cls, k, c):
        return cls(k, {(0,) * k: Fraction(c)})

    @classmethod
    def variable(cls, k, index, power=1):
        """v_{index} ** power (index is 1-based)."""
        e = [0] * k
        e[index - 1] = power
        return cls(k, {tuple(e): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return QPoly(self.k, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return QPoly(self.k, out)

    def scale(self, c):
        c = Fraction(c)
        return QPoly(self.k, {e: cc * c for e, cc in self.terms.items()})

    def shift_variable(self, index, power):
        """Multiply by v_{index}^power."""
        j = index - 1
        out = {}
        for e, c in self.terms.items():
            ee = list(e)
            ee[j] += power
            out[tuple(ee)] = c
        return QPoly(self.k, out)

    def kill(self, indices) -> "QPoly":
        """Set v_j = 0 for every 1-based j in indices."""
        js = {j - 1 for j in indices}
        out = {e: c for e, c in self.terms.items() if all(e[j] == 0 for j in js)}
        return QPoly(self.k, out)

    def substitute(self, values) -> Fraction:
        vals = [Fraction(v) for v in values]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for j, exp in enumerate(e):
                if exp:
                    term *= vals[j] ** exp
            total += term
        return total

    def __eq__(self, other):
        return isinstance(other, QPoly) and self.k == other.k and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"v{j+1}^{x}" for j, x in enumerate(e) if x) or "1"
            bits.append(f"({c})*{mono}")
        return " + ".join(bits)


@dataclass(frozen=True)
class UniversalATypical:
    """Universal logarithm coefficients b_0..b_prec as polynomials in
    v_1..v_k.  Invariant: b_0 = 1 and p^i·b_i has p-integral coefficients."""

    p: int
    q: int
    k: int
    prec: int
    b: tuple


def atypical_logarithm(p: int, q: int, k: int, n_terms: int) -> UniversalATypical:
    """Run the defining recursion p·b_n = Σ_{j<n} b_j·v_{n-j}^{q^j} symbolically.

    >>> u = atypical_logarithm(2, 2, 2, 2)
    >>> u.b[1] == QPoly(2, {(1, 0): Fraction(1, 2)})
    True
    >>> u.b[2] == QPoly(2, {(0, 1): Fraction(1, 2), (3, 0): Fraction(1, 4)})
    True
    """
    if k < 1 or n_terms < 1:
        raise ValueError("need at least one variable and one term")
    b = [QPoly.const(k, 1)]
    for n in range(1, n_terms + 1):
        acc = QPoly(k)
        for j in range(n):
            idx = n - j
            if idx > k:
                continue
            acc = acc + b[j].shift_variable(idx, q**j)
        b.append(acc.scale(Fraction(1, p)))
    for i, bi in enumerate(b):
        for e, c in bi.terms.items():
            if _vp(c, p) < -i:
                raise IntegralityError(f"p^{i}·b_{i} not integral at {e}", e)
    return UniversalATypical(p=p, q=q, k=k, prec=n_terms, b=tuple(b))


def _numeric_log_coeffs(p, q, values, i_max):
    """b_0..b_{i_max} with the v's specialized to rationals."""
    vals = [Fraction(v) for v in values]
    b = [Fraction(1)]
    for n in range(1, i_max + 1):
        s = Fraction(0)
        for j in range(n):
            idx = n - j
            if idx <= len(vals) and vals[idx - 1]:
                s += b[j] * vals[idx - 1] ** (q**j)
        b.append(s / p)
    return b


def _inverse_log_coeffs(b, q, D) -> dict:
    """Compositional inverse g of f(T) = T + Σ b_i T^{q^i}, to degree D.

    Lagrange inversion: with φ = f/T, g_e = [T^{e-1}] φ^{-e} / e, and φ is
    1 + Σ b_i u_i with u_i = T^{q^i - 1}, so the coefficient is a finite sum
    of multinomials over solutions of Σ k_i (q^i - 1) = e - 1:

        (-1)^K · C(e-1+K, K) · K!/Πk_i! · Π b_i^{k_i},   K = Σ k_i.

    Every g_e is an integer polynomial in the b_i, so denominators stay
    p-powers; the division by e always cancels.
    """
    steps = [(q**i - 1, b[i]) for i in range(1, len(b)) if b[i] and q**i <= D]
    g = {1: Fraction(1)}
    if not steps:
        return g
    stride = math.gcd(*[s for s, _ in steps])
    for e in range(1 + stride, D + 1, stride):
        m = e - 1
        total = Fraction(0)

        def walk(pos, rem, K, prod):
            nonlocal total
            if rem == 0:
                total += (
                    (-1) ** K
                    * math.comb(e - 1 + K, K)
                    * prod
                    * math.factorial(K)
                )
                return
            if pos == len(steps):
                return
            size, coeff = steps[pos]
            count = 0
            power = Fraction(1)
            fact = 1
            while rem - size * count >= 0:
                if count:
                    power *= coeff
                    fact *= count
                walk(pos + 1, rem - size * count, K + count, prod * power / fact)
                count += 1

        walk(0, m, 0, Fraction(1))
        if total:
            g[e] = total / e
    return g


# ---------------------------------------------------------------------------
# sparse composition engines


def _scale_bound(g, s_terms, p, D):
    mg = max((_den_exp(c, p, "inverse-log coefficient") for c in g.values()), default=0)
    mb = 0
    rho = Fraction(0)
    for dx, dy, c in s_terms:
        e = _den_exp(Fraction(c), p, "series coefficient")
        mb = max(mb, e)
        deg = dx + dy
        if deg > 0 and e > 0:
            rho = max(rho, Fraction(e, deg))
    return mg, mb, mg + math.ceil(D * rho) + mb + 4


def _compose_scaled(g: dict, s_terms, p: int, D: int) -> dict:
    """Σ_e g_e·S^e truncated at total degree D, S sparse bivariate.

    Horner over e walking down to 0; dictionary keys pack (i, j) into one
    integer so the inner loop is integer adds and one checked division.
    Terms of S sharing a coefficient and a total degree (the f(x)/f(y)
    mirror pairs) are fused so the scaled product is computed once.
    Requires every coefficient denominator to be a p-power.
    """
    g = {e: Fraction(c) for e, c in g.items() if c and e <= D}
    if not g:
        return {}
    shift = (D + 1).bit_length()
    mask = (1 << shift) - 1
    mg, mb, M = _scale_bound(g, s_terms, p, D)
    pmb = p**mb
    pM = p**M
    grouped = {}
    for dx, dy, c in s_terms:
        c = Fraction(c)
        if not c:
            continue
        e = _den_exp(c, p)
        bn = c.numerator * p ** (mb - e)
        grouped.setdefault((dx + dy, bn), []).append((dx << shift) | dy)
    if not grouped:
        return {}
    s_enc = [(dd, bn, tuple(keys)) for (dd, bn), keys in sorted(grouped.items())]

    def scaled(fr: Fraction) -> int:
        e = _den_exp(fr, p)
        return fr.numerator * p ** (M - e)

    e_top = max(g)
    acc = {0: scaled(g[e_top])}
    for e in range(e_top - 1, -1, -1):
        bound = D - e
        nxt = {}
        for key, v in acc.items():
            d0 = (key >> shift) + (key & mask)
            for dd, bn, deltas in s_enc:
                if d0 + dd > bound:
                    continue
                if bn == pmb:
                    w = v
                else:
                    w, r = divmod(v * bn, pmb)
                    if r:
                        raise IntegralityError("scale exhausted during composition")
                for dk in deltas:
                    kk = key + dk
                    if kk in nxt:
                        nxt[kk] += w
                    else:
                        nxt[kk] = w
        acc = nxt
        ge = g.get(e)
        if ge is not None:
            acc[0] = acc.get(0, 0) + scaled(ge)
        if e % 16 == 0:
            acc = {
                k: v
                for k, v in acc.items()
                if v and (k >> shift) + (k & mask) <= bound
            }
    out = {}
    for key, v in acc.items():
        if v:
            out[(key >> shift, key & mask)] = Fraction(v, pM)
    return out


def _compose_fraction(g: dict, s_terms, D: int) -> dict:
    """Same contract as _compose_scaled but plain Fraction arithmetic, for
    specialization values whose denominators are not p-powers.  Only sound
    for small truncations; callers guard."""
    g = {e: Fraction(c) for e, c in g.items() if c and e <= D}
    if not g:
        return {}
    s = [(dx, dy, Fraction(c)) for dx, dy, c in s_terms if c]
    e_top = max(g)
    acc = {(0, 0): g[e_top]}
    for e in range(e_top - 1, -1, -1):
        bound = D - e
        nxt = {}
        for (i, j), v in acc.items():
            if i + j > bound:
                continue
            for dx, dy, c in s:
                if i + j + dx + dy > bound:
                    continue
                key = (i + dx, j + dy)
                nxt[key] = nxt.get(key, Fraction(0)) + v * c
        acc = nxt
        if e in g:
            acc[(0, 0)] = acc.get((0, 0), Fraction(0)) + g[e]
    return {k: v for k, v in acc.items() if v}


# ---------------------------------------------------------------------------
# truncated series containers


@dataclass(frozen=True)
class BivariateSeries:
    """Total-degree-truncated series in two variables; ring is RATIONALS or
    an FqField."""

    ring: object
    D: int
    coeffs: dict

    def __post_init__(self):
        clean = {}
        for (i, j), c in self.coeffs.items():
            if i < 0 or j < 0 or i + j > self.D:
                raise ValueError(f"monomial ({i},{j}) outside truncation {self.D}")
            if c:
                clean[(i, j)] = c
        object.__setattr__(self, "coeffs", clean)

    def coeff(self, i, j):
        c = self.coeffs.get((i, j))
        if c is not None:
            return c
        return Fraction(0) if self.ring == RATIONALS else self.ring.zero()

    def support(self):
        return sorted(self.coeffs, key=lambda ij: (ij[0] + ij[1], ij))

    def reduce_mod_p(self, field: FqField) -> "BivariateSeries":
        if self.ring != RATIONALS:
            raise ValueError("already over a finite field")
        return BivariateSeries(
            field, self.D, {k: _residue(c, field) for k, c in self.coeffs.items()}
        )

    def as_json(self):
        return {
            "D": self.D,
            "coeffs": [
                [i, j, _coeff_json(c)] for (i, j), c in sorted(self.coeffs.items())
            ],
        }


@dataclass(frozen=True)
class UnivariateSeries:
    ring: object
    D: int
    coeffs: dict

    def __post_init__(self):
        clean = {}
        for e, c in self.coeffs.items():
            if e < 0 or e > self.D:
                raise ValueError(f"exponent {e} outside truncation {self.D}")
            if c:
                clean[e] = c
        object.__setattr__(self, "coeffs", clean)

    def coeff(self, e):
        c = self.coeffs.get(e)
        if c is not None:
            return c
        return Fraction(0) if self.ring == RATIONALS else self.ring.zero()

    def is_zero(self):
        return not self.coeffs

    def reduce_mod_p(self, field: FqField) -> "UnivariateSeries":
        if self.ring != RATIONALS:
            raise ValueError("already over a finite field")
        return UnivariateSeries(
            field, self.D, {e: _residue(c, field) for e, c in self.coeffs.items()}
        )

    def as_json(self):
        return {
            "D": self.D,
            "coeffs": [[e, _coeff_json(c)] for e, c in sorted(self.coeffs.items())],
        }


def _coeff_json(c):
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)
    return c.to_int()


def _residue(fr: Fraction, field: FqField):
    """Reduce a p-integral rational into the prime subfield of F_q."""
    p = field.p
    if fr.denominator % p == 0:
        raise IntegralityError(f"{fr} is not {p}-integral")
    return field.from_int(fr.numerator * pow(fr.denominator, -1, p) % p)


# ---------------------------------------------------------------------------
# formal modules


@dataclass(frozen=True)
class ADescriptor:
    """Unramified coefficient descriptor: π specializes to p, residue size q."""

    p: int
    q: int
    pi_symbol: str = "p"

    def __post_init__(self):
        q, p = self.q, self.p
        while q % p == 0:
            q //= p
        if q != 1 or self.q < 2:
            raise ValueError("q must be a positive power of p")


class FormalModule:
    """A group law plus whatever brackets have been materialized ([p] at
    minimum for modules built here).

    Modules built from a logarithm defer the (expensive) law assembly until
    .law is first read; every bracket can be had without it.
    """

    def __init__(
        self,
        descriptor: ADescriptor,
        law: BivariateSeries | None = None,
        brackets: dict | None = None,
        values: tuple | None = None,
        log_coeffs: tuple | None = None,
        inv_coeffs: dict | None = None,
        D: int | None = None,
    ):
        if law is None and log_coeffs is None:
            raise ValueError("need a law or a logarithm to build one from")
        if D is None:
            D = law.D
        self.descriptor = descriptor
        self.brackets = {} if brackets is None else brackets
        self.values = values
        self.log_coeffs = log_coeffs
        self.inv_coeffs = inv_coeffs
        self.D = D
        self._law = law

    @property
    def law(self) -> BivariateSeries:
        if self._law is None:
            self._law = _law_series(
                self.log_coeffs, self.inv_coeffs, self.descriptor, self.D
            )
        return self._law

    def bracket(self, a) -> UnivariateSeries:
        """[a](T) = f^{-1}(a·f(T)); computed on demand for modules that carry
        their logarithm, cached in .brackets."""
        a = Fraction(a)
        if a in self.brackets:
            return self.brackets[a]
        if self.log_coeffs is None:
            raise ValueError("module carries no logarithm; only stored brackets exist")
        series = _bracket_series(
            self.log_coeffs, self.inv_coeffs, a, self.descriptor, self.D
        )
        self.brackets[a] = series
        return series

    def residue_module(self, field: FqField | None = None) -> "FormalModule":
        """Reduce the law and all stored brackets mod p into F_q."""
        if field is None:
            q, p, m = self.descriptor.q, self.descriptor.p, 0
            while q > 1:
                q //= p
                m += 1
            field = fq_field(p, m)
        return FormalModule(
            descriptor=self.descriptor,
            law=self.law.reduce_mod_p(field),
            brackets={a: s.reduce_mod_p(field) for a, s in self.brackets.items()},
            values=self.values,
        )

    def as_json(self):
        ring = self.law.ring
        return {
            "ring": "Q" if ring == RATIONALS else {"p": ring.p, "m": ring.m},
            "descriptor": {"p": self.descriptor.p, "q": self.descriptor.q},
            "law": self.law.as_json(),
            "brackets": {str(a): s.as_json() for a, s in self.brackets.items()},
        }


def _log_series_terms(b, q, D, factor=Fraction(1), axis=0):
    """Sparse terms of factor·f(x) (axis 0) or factor·f(y) (axis 1)."""
    out = []
    for i, bi in enumerate(b):
        if not bi or q**i > D:
            continue
        e = q**i
        term = (e, 0, bi * factor) if axis == 0 else (0, e, bi * factor)
        out.append(term)
    return out


def _p_power_values(values, p):
    return all(_den_exp_ok(Fraction(v), p) for v in values)


def _den_exp_ok(fr, p):
    den = fr.denominator
    while den % p == 0:
        den //= p
    return den == 1


def _bracket_series(b, g, a, descriptor, D) -> UnivariateSeries:
    p, q = descriptor.p, descriptor.q
    s_terms = _log_series_terms(b, q, D, factor=Fraction(a))
    if _p_power_values([a], p) and _p_power_values([c for _, _, c in s_terms], p):
        raw = _compose_scaled(g, s_terms, p, D)
    else:
        if D > 160:
            raise ValueError("non-p-power denominators only supported for D <= 160")
        raw = _compose_fraction(g, s_terms, D)
    coeffs = {i: c for (i, _), c in raw.items()}
    lead = coeffs.get(1, Fraction(0))
    if lead != Fraction(a):
        raise IntegralityError(f"bracket linear term {lead} != {a}", (1,))
    return UnivariateSeries(RATIONALS, D, coeffs)


def atypical_module(p: int, q: int, values, D: int | None = None) -> FormalModule:
    """Specialize the universal construction at v_i = values[i-1].

    Values must be p-integral rationals.  Returns the characteristic-zero
    module (exact rational coefficients) with the [p] bracket attached;
    integrality of every law/bracket coefficient is verified and a violation
    raises IntegralityError naming the monomial — by the functional-equation
    lemma that can only mean a bug or a non-integral specialization.
    """
    desc = ADescriptor(p=p, q=q)
    if D is None:
        D = q**3 + q
    values = tuple(Fraction(v) for v in values)
    for v in values:
        if _vp(v, p) is not None and _vp(v, p) < 0:
            raise IntegralityError(f"specialization value {v} is not {p}-integral")
    i_max = 0
    while q ** (i_max + 1) <= D:
        i_max += 1
    b = _numeric_log_coeffs(p, q, values, i_max)
    g = _inverse_log_coeffs(b, q, D)
    module = FormalModule(
        descriptor=desc,
        values=values,
        log_coeffs=tuple(b),
        inv_coeffs=g,
        D=D,
    )
    pi = module.bracket(p)
    for e, c in pi.coeffs.items():
        if c.denominator % p == 0:
            raise IntegralityError(f"[p] coefficient at {e} = {c} not integral", (e,))
    return module


def _law_series(b, g, descriptor, D) -> BivariateSeries:
    p, q = descriptor.p, descriptor.q
    s_law = _log_series_terms(b, q, D, axis=0) + _log_series_terms(b, q, D, axis=1)
    if _p_power_values([c for _, _, c in s_law], p):
        raw = _compose_scaled(g, s_law, p, D)
    else:
        if D > 160:
            raise ValueError("non-p-power denominators only supported for D <= 160")
        raw = _compose_fraction(g, s_law, D)
    for (i, j), c in raw.items():
        if c.denominator % p == 0:
            raise IntegralityError(
                f"law coefficient at ({i},{j}) = {c} not {p}-integral", (i, j)
            )
    return BivariateSeries(RATIONALS, D, raw)


def honda_module(p: int, q: int, h: int, D: int | None = None) -> FormalModule:
    """The specialization v_h = 1, all other v_i = 0."""
    if h < 1:
        raise ValueError("h must be positive")
    return atypical_module(p, q, (0,) * (h - 1) + (1,), D)


# ---------------------------------------------------------------------------
# the multiplication-by-p congruence


@dataclass(frozen=True)
class CongruenceReport:
    ok: bool
    i: int
    ideal_exponent: int
    first_failure: tuple | None = None


def check_pi_congruence(module: FormalModule, i: int) -> CongruenceReport:
    """[p](x) ≡ v_i x^{q^i} modulo (p, v_1,…,v_{i-1}, x^{q^i + 1}) for the
    specialized module: in Z_p the ideal (p, values_{<i}) is (p^e) with
    e = min(1, v_p of each nonzero earlier value), so the check is a
    valuation floor on the first q^i coefficients."""
    if module.values is None:
        raise ValueError("module was not built from a specialization")
    p, q = module.descriptor.p, module.descriptor.q
    if i < 1:
        raise ValueError("i must be >= 1")
    cap = q**i
    if cap > module.D:
        raise ValueError(f"truncation {module.D} too small for i={i}")
    floor = 1
    for j in range(1, i):
        vj = module.values[j - 1] if j <= len(module.values) else Fraction(0)
        vpj = _vp(vj, p)
        if vpj is not None:
            floor = min(floor, vpj)
    vi = module.values[i - 1] if i <= len(module.values) else Fraction(0)
    pi = module.bracket(p)
    for e in range(1, cap + 1):
        c = pi.coeff(e)
        if e == cap:
            c = c - vi
        if c and (floor > 0) and _vp(c, p) < floor:
            return CongruenceReport(False, i, floor, (e,))
    return CongruenceReport(True, i, floor)


def check_pi_congruence_universal(p: int, q: int, i: int) -> CongruenceReport:
    """The same congruence with v_i,…  kept symbolic and v_1..v_{i-1} killed:
    working mod (v_1,…,v_{i-1}) the logarithm collapses to T + (v_i/p)·T^{q^i}
    below the cap, and the assertion is that every coefficient of
    [p](x) − v_i x^{q^i} lies in p·Z_p[v]."""
    if i < 1:
        raise ValueError("i must be >= 1")
    cap = q**i
    uni = atypical_logarithm(p, q, k=i, n_terms=i)
    killed = [bj.kill(range(1, i)) for bj in uni.b]
    for j in range(1, i):
        if not killed[j].is_zero():
            raise IntegralityError(f"b_{j} should vanish mod (v_1..v_{i-1})")
    # truncated series with QPoly coefficients, exponent-indexed
    f_ser = {1: QPoly.const(i, 1)}
    for j in range(1, i + 1):
        if q**j <= cap and not killed[j].is_zero():
            f_ser[q**j] = killed[j]

    def mul(a, b):
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                if e1 + e2 > cap:
                    continue
                prod = c1 * c2
                if e1 + e2 in out:
                    out[e1 + e2] = out[e1 + e2] + prod
                else:
                    out[e1 + e2] = prod
        return {e: c for e, c in out.items() if not c.is_zero()}

    def add(a, b):
        out = dict(a)
        for e, c in b.items():
            out[e] = out[e] + c if e in out else c
        return {e: c for e, c in out.items() if not c.is_zero()}

    def scale(a, c):
        return {e: cc.scale(c) for e, cc in a.items()}

    # fixed point g = T - Σ_j b_j g^{q^j}; degree-of-correctness grows every pass
    g_ser = {1: QPoly.const(i, 1)}
    passes = (cap - 1) // max(q - 1, 1) + 1
    for _ in range(passes):
        acc = {1: QPoly.const(i, 1)}
        for j in range(1, i + 1):
            e = q**j
            if e > cap or j >= len(killed) or killed[j].is_zero():
                continue
            power = {0: QPoly.const(i, 1)}
            base = g_ser
            n = e
            while n:
                if n & 1:
                    power = mul(power, base)
                n >>= 1
                if n:
                    base = mul(base, base)
            acc = add(acc, scale(mul({0: killed[j]}, power), -1))
        if acc == g_ser:
            break
        g_ser = acc
    # [p] = g(p·f)
    pf = scale(f_ser, p)
    pi_ser = {}
    power = {0: QPoly.const(i, 1)}
    exps = sorted(g_ser)
    prev = 0
    for e in exps:
        for _ in range(e - prev):
            power = mul(power, pf)
        prev = e
        pi_ser = add(pi_ser, mul({0: g_ser[e]}, power))
    target = QPoly.variable(i, i)
    diff = add(pi_ser, {cap: target.scale(-1)})
    for e in sorted(diff):
        for mono, c in sorted(diff[e].terms.items()):
            if _vp(c, p) < 1:
                return CongruenceReport(False, i, 1, (e, mono))
    return CongruenceReport(True, i, 1)


# ---------------------------------------------------------------------------
# axiom checking


@dataclass
class GroupLawReport:
    unit_ok: bool
    commutative_ok: bool
    associative_ok: bool | None
    method: str
    first_failure: tuple | None = None
    detail: dict = dataclass_field(default_factory=dict)

    @property
    def ok(self):
        return bool(self.unit_ok and self.commutative_ok and self.associative_ok)


def _bi_mult(a: dict, b: dict, D):
    out = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            if i1 + i2 + j1 + j2 > D:
                continue
            key = (i1 + i2, j1 + j2)
            prod = c1 * c2
            if key in out:
                out[key] = out[key] + prod
            else:
                out[key] = prod
    return {k: v for k, v in out.items() if v}


def _assoc_exact(F: BivariateSeries):
    """Trivariate identity F(F(x,y),z) = F(x,F(y,z)) checked term by term.

    Assembles both sides from powers of the law itself: F^(i) placed on the
    z^j (resp. x^i) axis.  Exact in any ring; cost grows fast with D."""
    D = F.D
    cf = F.coeffs
    one = Fraction(1) if F.ring == RATIONALS else F.ring.one()
    imax = max((i for i, _ in cf), default=0)
    jmax = max((j for _, j in cf), default=0)
    powers = {0: {(0, 0): one}, 1: dict(cf)}
    top = max(imax, jmax)
    for n in range(2, top + 1):
        powers[n] = _bi_mult(powers[n - 1], cf, D)
    lhs, rhs = {}, {}
    for (i, j), c in cf.items():
        for (a, bb), v in powers[i].items():
            if a + bb + j > D:
                continue
            key = (a, bb, j)
            prod = c * v
            lhs[key] = lhs[key] + prod if key in lhs else prod
        for (a, bb), v in powers[j].items():
            if i + a + bb > D:
                continue
            key = (i, a, bb)
            prod = c * v
            rhs[key] = rhs[key] + prod if key in rhs else prod
    lhs = {k: v for k, v in lhs.items() if v}
    rhs = {k: v for k, v in rhs.items() if v}
    for key in sorted(set(lhs) | set(rhs), key=lambda t: (sum(t), t)):
        if lhs.get(key) != rhs.get(key):
            return False, key
    return True, None


def check_group_law(
    F: BivariateSeries, method: str = "auto", seed: int = 0, reps: int = 2
) -> GroupLawReport:
    """Verify unit, commutativity, associativity up to the truncation.

    Unit and commutativity are always checked exactly on the coefficient
    dictionary.  Associativity strategy:

    - "exact": sparse trivariate assembly, any ring — the default for small D;
    - "dense": coordinate arrays over F_p with certified-exact convolutions
      (finite-field rings only);
    - "sampled": substitute (a·t, b·t, c·t) with a, b, c random in a large
      extension field and compare the two compositions as univariate series
      in t — each total-degree slice of the defect is a homogeneous
      polynomial, so the failure odds are bounded by Schwartz–Zippel and
      reported in the detail dict (finite prime-field coefficients only);
    - "skip": leave associativity unchecked (associative_ok = None).
    """
    one = Fraction(1) if F.ring == RATIONALS else F.ring.one()
    unit_fail = None
    for axis in (0, 1):
        seen_linear = False
        for (i, j), c in sorted(F.coeffs.items()):
            e_out, e_in = (i, j) if axis == 0 else (j, i)
            if e_in != 0:
                continue
            if e_out == 1:
                seen_linear = True
                if c != one:
                    unit_fail = (i, j)
                    break
            elif c:
                unit_fail = (i, j)
                break
        if unit_fail is None and not seen_linear:
            unit_fail = (1, 0) if axis == 0 else (0, 1)
        if unit_fail:
            break
    comm_fail = None
    for (i, j), c in sorted(F.coeffs.items()):
        if F.coeffs.get((j, i)) != c:
            comm_fail = (i, j)
            break
    report = GroupLawReport(
        unit_ok=unit_fail is None,
        commutative_ok=comm_fail is None,
        associative_ok=None,
        method=method,
    )
    if unit_fail:
        report.first_failure = ("unit", unit_fail)
    elif comm_fail:
        report.first_failure = ("commutativity", comm_fail)
    if method == "auto":
        if F.D <= 32:
            method = "exact"
        elif isinstance(F.ring, FqField):
            method = "dense" if F.D <= 200 else "sampled"
        else:
            raise ValueError(
                f"no automatic associativity strategy for rationals at D={F.D}; "
                "pass method explicitly or reduce mod p first"
            )
    report.method = method
    if method == "skip":
        return report
    if method == "exact":
        ok, fail = _assoc_exact(F)
    elif method == "dense":
        from . import fastcheck

        ok, fail = fastcheck.dense_associativity(F)
    elif method == "sampled":
        from . import fastcheck

        ok, fail, detail = fastcheck.sampled_associativity(F, seed=seed, reps=reps)
        report.detail["associativity"] = detail
    else:
        raise ValueError(f"unknown method {method!r}")
    report.associative_ok = ok
    if not ok and report.first_failure is None:
        report.first_failure = ("associativity", fail)
    return report


# ---------------------------------------------------------------------------
# homomorphisms and heights


@dataclass
class HomReport:
    law_ok: bool
    linearity: dict
    first_failure: tuple | None = None

    @property
    def ok(self):
        return self.law_ok and all(self.linearity.values())


def _uni_mult(a: dict, b: dict, D):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            if e1 + e2 > D:
                continue
            e = e1 + e2
            prod = c1 * c2
            out[e] = out[e] + prod if e in out else prod
    return {e: c for e, c in out.items() if c}


def _uni_compose(outer: dict, inner: dict, D, one):
    """outer(inner(T)) truncated at D; inner must have no constant term."""
    if inner.get(0):
        raise ValueError("inner series has a constant term")
    out = {}
    power = {0: one}
    prev = 0
    for e in sorted(outer):
        for _ in range(e - prev):
            power = _uni_mult(power, inner, D)
        prev = e
        c = outer[e]
        for ee, v in power.items():
            prod = c * v
            out[ee] = out[ee] + prod if ee in out else prod
    return {e: c for e, c in out.items() if c}


def check_hom(f: UnivariateSeries, F: FormalModule, G: FormalModule) -> HomReport:
    """f is a morphism when f(F(X,Y)) = G(f(X), f(Y)) and f intertwines every
    bracket stored on both modules."""
    if f.coeffs.get(0):
        raise ValueError("morphisms have zero constant term")
    if F.law.ring != G.law.ring:
        raise FieldMismatch("modules over different rings")
    ring = F.law.ring
    one = Fraction(1) if ring == RATIONALS else ring.one()
    D = min(f.D, F.law.D, G.law.D)
    # f(F(X,Y)) via powers of the law
    lhs = {}
    power = {(0, 0): one}
    prev = 0
    for e in sorted(f.coeffs):
        for _ in range(e - prev):
            power = _bi_mult(power, F.law.coeffs, D)
        prev = e
        c = f.coeffs[e]
        for key, v in power.items():
            prod = c * v
            lhs[key] = lhs[key] + prod if key in lhs else prod
    lhs = {k: v for k, v in lhs.items() if v}
    # G(f(X), f(Y)) via powers of f on each axis
    fpow = {0: {0: one}, 1: dict(f.coeffs)}
    top = max((max(i, j) for i, j in G.law.coeffs), default=0)
    for n in range(2, top + 1):
        fpow[n] = _uni_mult(fpow[n - 1], f.coeffs, D)
    rhs = {}
    for (i, j), c in G.law.coeffs.items():
        for a, va in fpow[i].items():
            if a > D:
                continue
            for bb, vb in fpow[j].items():
                if a + bb > D:
                    continue
                key = (a, bb)
                prod = c * va * vb
                rhs[key] = rhs[key] + prod if key in rhs else prod
    rhs = {k: v for k, v in rhs.items() if v}
    law_ok = lhs == rhs
    first = None
    if not law_ok:
        for key in sorted(set(lhs) | set(rhs), key=lambda t: (sum(t), t)):
            if lhs.get(key) != rhs.get(key):
                first = ("hom", key)
                break
    linearity = {}
    shared = set(F.brackets) & set(G.brackets)
    for a in sorted(shared, key=str):
        left = _uni_compose(f.coeffs, F.brackets[a].coeffs, D, one)
        right = _uni_compose(G.brackets[a].coeffs, f.coeffs, D, one)
        linearity[a] = left == right
        if not linearity[a] and first is None:
            for e in sorted(set(left) | set(right)):
                if left.get(e) != right.get(e):
                    first = (f"bracket {a}", (e,))
                    break
    return HomReport(law_ok=law_ok, linearity=linearity, first_failure=first)


@dataclass(frozen=True)
class HeightReport:
    h: int | None  # None means no nonzero term up to the truncation
    degree_checked: int

    @property
    def is_infinite(self):
        return self.h is None


def height(f: UnivariateSeries, q: int) -> HeightReport:
    """Largest h with the monomial support of f inside q^h·Z, together with
    the truncation that certifies it."""
    if not isinstance(f.ring, FqField):
        raise ValueError("height is defined over characteristic-p coefficients")
    support = [e for e, c in f.coeffs.items() if e > 0 and c]
    if f.coeffs.get(0):
        raise ValueError("series has a constant term")
    if not support:
        return HeightReport(None, f.D)
    h = None
    for e in support:
        k = 0
        while e % q == 0:
            e //= q
            k += 1
        h = k if h is None else min(h, k)
    return HeightReport(h, f.D)


@dataclass(frozen=True)
class AdditivityReport:
    status: str  # ok | fail | inconclusive
    ht_f: int | None
    ht_g: int | None
    ht_composite: int | None


def height_additivity_check(f: UnivariateSeries, g: UnivariateSeries, q: int) -> AdditivityReport:
    """ht(g∘f) = ht(f) + ht(g), certified only when all three heights are
    visible at the working truncation."""
    D = min(f.D, g.D)
    one = f.ring.one()
    comp = _uni_compose(g.coeffs, f.coeffs, D, one)
    hf = height(f, q)
    hg = height(g, q)
    hc = height(UnivariateSeries(f.ring, D, comp), q)
    if hf.h is None or hg.h is None or hc.h is None:
        return AdditivityReport("inconclusive", hf.h, hg.h, hc.h)
    status = "ok" if hc.h == hf.h + hg.h else "fail"
    return AdditivityReport(status, hf.h, hg.h, hc.h)


# ---------------------------------------------------------------------------
# the polynomial model of multiplication by p


@dataclass(frozen=True)
class PiPolynomial:
    """[p](x) = a_1 x^{q^g} + … + a_d x^{q^{g+d-1}} + x^{q^s} with s = g+d,
    coefficients in the valuation ideal and a_1 nonzero."""

    g: int
    d: int
    a: tuple
    field: FqField

    def __post_init__(self):
        if self.g < 1 or self.d < 1:
            raise ValueError("g and d must be positive")
        if len(self.a) != self.d:
            raise ValueError(f"expected {self.d} coefficients, got {len(self.a)}")
        if self.a[0].is_exact_zero():
            raise ValueError("a_1 must be nonzero")
        for i, ai in enumerate(self.a, start=1):
            if not ai.is_exact_zero() and ai.valuation() < 1:
                raise ValueError(f"v(a_{i}) must be >= 1")

    @property
    def s(self):
        return self.g + self.d

    def q(self, q_base: int):  # pragma: no cover - convenience only
        return q_base


def pi_series(P: PiPolynomial, q: int) -> SeriesPoly:
    """The polynomial itself, exponents q^{g+i-1} and monic top q^s."""
    terms = {q ** (P.g + i - 1): ai for i, ai in enumerate(P.a, start=1)}
    terms[q**P.s] = LaurentSeries.one(P.field)
    return SeriesPoly.from_terms(P.field, terms)


def v_polynomial(P: PiPolynomial, q: int) -> SeriesPoly:
    """V with V(x^{q^g}) = [p](x): exponents drop to q^{i-1} and q^d."""
    terms = {q ** (i - 1): ai for i, ai in enumerate(P.a, start=1)}
    terms[q**P.d] = LaurentSeries.one(P.field)
    return SeriesPoly.from_terms(P.field, terms)


def v_twist(P: PiPolynomial, i: int, q: int) -> SeriesPoly:
    """Coefficients of V pushed through the q^{ig}-power Frobenius."""
    if i == 0:
        return v_polynomial(P, q)
    return v_polynomial(P, q).twist(q ** (i * P.g))


def inflate(poly: SeriesPoly, m: int) -> SeriesPoly:
    """Substitute x ↦ x^m."""
    terms = {e * m: c for e, c in enumerate(poly.coeffs) if not c.is_exact_zero()}
    return SeriesPoly.from_terms(poly.field, terms)
