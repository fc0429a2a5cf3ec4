"""Vectorized associativity checks for group laws over finite fields.

Two strategies, both exact despite running through floating-point FFTs:
convolution inputs are reduced residues, so every true convolution value is
a small integer far below 2^53, and each inverse transform is rounded and
asserted to be within 0.01 of an integer before reduction.  A rounding
failure is therefore impossible to miss — it raises, it cannot corrupt.

- dense_associativity: assembles both trivariate compositions on a full
  (D+1)^3 coefficient grid, one coordinate plane per basis vector of F_q
  over F_p.  Certain, but memory-bound; guarded to moderate truncations.

- sampled_associativity: substitutes (a·t, b·t, c·t) for random a, b, c in
  a large extension of F_p and compares the two compositions as univariate
  series in t.  Each coefficient of t^e in the difference is a homogeneous
  form of degree e evaluated at (a, b, c), so by Schwartz–Zippel a nonzero
  slice survives a random point with probability <= e/p^r; the exact bound
  for the run is reported in the detail dict.
"""

from __future__ import annotations

import random

import numpy as np

from .fq import FqElem, FqField, fq_field

_MAX_DENSE_D = 200


def _fast_len(n: int) -> int:
    """Smallest 5-smooth integer >= n (keeps numpy FFTs off slow paths)."""
    if n <= 1:
        return 1
    best = None
    f5 = 1
    while f5 < 4 * n:
        f35 = f5
        while f35 < 4 * n:
            k = f35
            while k < n:
                k *= 2
            if best is None or k < best:
                best = k
            f35 *= 3
        f5 *= 5
    return best


def _reduction_rows(field: FqField) -> np.ndarray:
    """Row r = coordinates of theta^(m+r) on the power basis, r = 0..m-2."""
    p, m, mod = field.p, field.m, field.modulus
    rows = np.zeros((max(m - 1, 0), m), dtype=np.int64)
    cur = [(-mod[j]) % p for j in range(m)]
    for r in range(m - 1):
        rows[r] = cur
        lead = cur[-1]
        nxt = [0] + cur[:-1]
        if lead:
            for j in range(m):
                nxt[j] = (nxt[j] + lead * ((-mod[j]) % p)) % p
        cur = nxt
    return rows


def _conv2_exact(fa, fb, shape, s0, s1):
    raw = np.fft.irfft2(fa * fb, shape)[:s0, :s1]
    out = np.rint(raw)
    err = np.max(np.abs(raw - out)) if out.size else 0.0
    if err > 0.01:
        raise ArithmeticError(f"FFT convolution left residue {err}; values too large")
    return out.astype(np.int64)


# ---------------------------------------------------------------------------
# dense plane assembly


def _mult_matrix(c: FqElem) -> np.ndarray:
    field = c.field
    m = field.m
    M = np.zeros((m, m), dtype=np.int64)
    col = c
    theta = field.elem((0, 1)) if m > 1 else None
    for k in range(m):
        M[:, k] = col.coeffs
        if k + 1 < m:
            col = col * theta
    return M


def _coord_planes(F) -> np.ndarray:
    field = F.ring
    m, D = field.m, F.D
    arr = np.zeros((m, D + 1, D + 1), dtype=np.int64)
    for (i, j), c in F.coeffs.items():
        arr[:, i, j] = c.coeffs
    return arr


def _fq_bivar_mul(A, fb, R, p, D, shape, s0):
    """A * base for (m, D+1, D+1) coordinate planes; fb holds the rfft2 of
    each base plane.  Exact, reduced mod p, truncated past total degree D."""
    m = A.shape[0]
    freq = [None] * (2 * m - 1)
    for da in range(m):
        fa = np.fft.rfft2(A[da], shape)
        for db in range(m):
            t = fa * fb[db]
            if freq[da + db] is None:
                freq[da + db] = t
            else:
                freq[da + db] += t
    planes = []
    for k in range(2 * m - 1):
        raw = np.fft.irfft2(freq[k], shape)[: D + 1, : D + 1]
        out = np.rint(raw)
        err = np.max(np.abs(raw - out))
        if err > 0.01:
            raise ArithmeticError(f"FFT convolution left residue {err}")
        planes.append(out.astype(np.int64) % p)
    low = np.stack(planes[:m])
    for r in range(m - 1):
        hi = planes[m + r]
        for j in range(m):
            if R[r, j]:
                low[j] += R[r, j] * hi
    low %= p
    ii, jj = np.indices((D + 1, D + 1))
    low[:, ii + jj > D] = 0
    return low


def dense_associativity(F):
    """Compare F(F(x,y),z) and F(x,F(y,z)) cell by cell on the full grid.

    Returns (ok, first_failing_monomial)."""
    field = F.ring
    if not isinstance(field, FqField):
        raise ValueError("dense check needs finite-field coefficients")
    D = F.D
    if D > _MAX_DENSE_D:
        raise ValueError(f"dense grid at D={D} would not fit; use the sampled check")
    m, p = field.m, field.p
    R = _reduction_rows(field)
    base = _coord_planes(F)
    if not F.coeffs:
        return True, None
    top = max(max(i, j) for i, j in F.coeffs)
    s0 = 2 * D + 1
    shape = (_fast_len(s0), _fast_len(s0))
    fb = [np.fft.rfft2(base[db], shape) for db in range(m)]
    powers = [None] * (top + 1)
    P0 = np.zeros((m, D + 1, D + 1), dtype=np.int64)
    P0[0, 0, 0] = 1
    powers[0] = P0
    if top >= 1:
        powers[1] = base
    for n in range(2, top + 1):
        powers[n] = _fq_bivar_mul(powers[n - 1], fb, R, p, D, shape, s0)
    W1 = np.zeros((m, D + 1, D + 1, D + 1), dtype=np.int64)
    W2 = np.zeros_like(W1)
    mat_cache = {}
    for (i, j), c in F.coeffs.items():
        key = c.coeffs
        M = mat_cache.get(key)
        if M is None:
            M = mat_cache[key] = _mult_matrix(c)
        left = np.tensordot(M, powers[i], axes=(1, 0)) % p
        W1[:, :, :, j] += left
        right = np.tensordot(M, powers[j], axes=(1, 0)) % p
        W2[:, i, :, :] += right
    W1 %= p
    W2 %= p
    a, b, cg = np.indices((D + 1, D + 1, D + 1), sparse=True)
    outside = (a + b + cg) > D
    W1[:, outside] = 0
    W2[:, outside] = 0
    diff = np.any(W1 != W2, axis=0)
    if not diff.any():
        return True, None
    cells = np.argwhere(diff)
    sums = cells.sum(axis=1)
    order = np.lexsort((cells[:, 2], cells[:, 1], cells[:, 0], sums))
    first = tuple(int(x) for x in cells[order[0]])
    return False, first


# ---------------------------------------------------------------------------
# sampled scalar lines


def _vec_mul(A, B, R, p):
    """Batched product in F_{p^r}: A is (n, r), B is (n, r) or (r,)."""
    r = R.shape[1]
    if B.ndim == 1:
        B = np.broadcast_to(B, A.shape)
    n = A.shape[0]
    C = np.zeros((n, 2 * r - 1), dtype=np.int64)
    for k in range(r):
        col = A[:, k]
        if not col.any():
            continue
        C[:, k : k + r] += col[:, None] * B
    low = C[:, :r] + C[:, r:] @ R
    return low % p


def _pow_table(x, n, R, p):
    r = R.shape[1]
    out = np.zeros((n + 1, r), dtype=np.int64)
    out[0, 0] = 1
    cur = np.array(x, dtype=np.int64)[None, :]
    for i in range(1, n + 1):
        out[i] = cur
        if i < n:
            cur = _vec_mul(cur, x, R, p)
    return out


def _line_value(support, pow_a, pow_b, L, R, p):
    """F(a·t, b·t) as a (L, r) series over F_{p^r}."""
    I, J, V = support
    terms = _vec_mul(pow_a[I], pow_b[J], R, p) * V[:, None]
    u = np.zeros((L, R.shape[1]), dtype=np.int64)
    np.add.at(u, I + J, terms)
    return u % p


def _series_mul_fft(acc, fu, shape, L, width, R, p):
    fa = np.fft.rfft2(acc, shape)
    raw = np.fft.irfft2(fa * fu, shape)[:L, :width]
    out = np.rint(raw)
    err = np.max(np.abs(raw - out))
    if err > 0.01:
        raise ArithmeticError(f"FFT series product left residue {err}")
    out = out.astype(np.int64)
    r = R.shape[1]
    low = out[:, :r] + out[:, r:] @ R
    return low % p


def _horner_side(by_outer, u, pow_inner, L, R, p, shape, width):
    """Σ_outer u^outer · Σ_inner c·(s·t)^inner, series in t."""
    fu = np.fft.rfft2(u, shape)
    acc = np.zeros((L, R.shape[1]), dtype=np.int64)
    started = False
    for outer in range(max(by_outer), -1, -1):
        if started:
            acc = _series_mul_fft(acc, fu, shape, L, width, R, p)
        row = by_outer.get(outer)
        if row is not None:
            J, V = row
            terms = pow_inner[J] * V[:, None]
            np.add.at(acc, J, terms)
            acc %= p
            started = True
    return acc


def sampled_associativity(F, seed=0, reps=2, ext_degree=None):
    """Probabilistic associativity check on random scalar lines.

    Needs prime-subfield coefficients (every law built here reduces from
    rational integrality, so that is the common case).  Returns
    (ok, first_failing_t_degree_or_None, detail)."""
    field = F.ring
    if not isinstance(field, FqField):
        raise ValueError("sampled check needs finite-field coefficients")
    p = field.p
    for (i, j), c in F.coeffs.items():
        if any(c.coeffs[1:]):
            raise ValueError(
                f"sampled check needs prime-subfield coefficients; ({i},{j}) is not"
            )
    D = F.D
    if ext_degree is None:
        ext_degree = 1
        while p**ext_degree < 1 << 26:
            ext_degree += 1
    ext = fq_field(p, ext_degree)
    R = _reduction_rows(ext)
    r = ext_degree
    L = D + 1
    width = 2 * r - 1
    shape = (_fast_len(2 * L - 1), _fast_len(width))
    items = sorted(F.coeffs.items())
    I = np.array([i for (i, _), _ in items], dtype=np.int64)
    J = np.array([j for (_, j), _ in items], dtype=np.int64)
    V = np.array([c.coeffs[0] for _, c in items], dtype=np.int64)
    by_i = {}
    by_j = {}
    for idx in range(len(items)):
        by_i.setdefault(int(I[idx]), [[], []])
        by_i[int(I[idx])][0].append(int(J[idx]))
        by_i[int(I[idx])][1].append(int(V[idx]))
        by_j.setdefault(int(J[idx]), [[], []])
        by_j[int(J[idx])][0].append(int(I[idx]))
        by_j[int(J[idx])][1].append(int(V[idx]))
    by_i = {k: (np.array(a), np.array(v)) for k, (a, v) in by_i.items()}
    by_j = {k: (np.array(a), np.array(v)) for k, (a, v) in by_j.items()}
    rng = random.Random(seed)

    def sample_point():
        while True:
            vec = [rng.randrange(p) for _ in range(r)]
            if any(vec):
                return np.array(vec, dtype=np.int64)

    first_bad = None
    for _ in range(reps):
        av, bv, cv = sample_point(), sample_point(), sample_point()
        pow_a = _pow_table(av, D, R, p)
        pow_b = _pow_table(bv, D, R, p)
        pow_c = _pow_table(cv, D, R, p)
        u = _line_value((I, J, V), pow_a, pow_b, L, R, p)
        w1 = _horner_side(by_i, u, pow_c, L, R, p, shape, width)
        v = _line_value((I, J, V), pow_b, pow_c, L, R, p)
        w2 = _horner_side(by_j, v, pow_a, L, R, p, shape, width)
        if not np.array_equal(w1, w2):
            bad = np.argwhere(np.any(w1 != w2, axis=1))
            e = int(bad.min())
            if first_bad is None or e < first_bad:
                first_bad = e
    per_slice = (D / p**r) ** reps
    detail = {
        "strategy": "sampled",
        "extension_degree": r,
        "reps": reps,
        "seed": seed,
        "false_pass_bound": f"{(D + 1) * per_slice:.3e}",
    }
    return first_bad is None, first_bad, detail
