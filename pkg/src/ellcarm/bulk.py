"""Vectorized kernels for curve sweeps modulo a prime p.

Everything here works on numpy arrays of projective points (X, Y, Z) mod p,
with per-row curve coefficients, using the same two complete addition laws
as curves.py.  All tables are cached per prime.  int64 is safe throughout
for p up to ~50000 (intermediate products stay below 2^63).
"""

from functools import lru_cache
from math import isqrt

import numpy as np

from .arith import factorize

#: traces at or below this prime are served from full (A, B) tables
TABLE_MAX = 401

#: sentinel marking singular (bad-reduction) pairs in tables
SINGULAR = np.iinfo(np.int32).max


@lru_cache(maxsize=None)
def sqrt_table(p: int) -> np.ndarray:
    """t[v] = some square root of v mod p, or -1 if v is a non-residue."""
    t = np.full(p, -1, dtype=np.int64)
    y = np.arange(p, dtype=np.int64)
    t[y * y % p] = y
    return t


@lru_cache(maxsize=None)
def chi_table(p: int) -> np.ndarray:
    """Quadratic character mod p as an int8 lookup table."""
    chi = np.where(sqrt_table(p) >= 0, 1, -1).astype(np.int8)
    chi[0] = 0
    return chi


def singular_mask(p: int, A, B):
    """True where y^2 = x^3 + Ax + B is singular mod p."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    return (4 * (A * A % p) * A + 27 * B * B) % p == 0


def traces_of(p: int, A, B) -> np.ndarray:
    """Frobenius traces for a batch of curves mod p (x-sweep, vectorized)."""
    A = np.atleast_1d(np.asarray(A, dtype=np.int64)) % p
    B = np.atleast_1d(np.asarray(B, dtype=np.int64)) % p
    chi = chi_table(p)
    acc = np.zeros(A.shape, dtype=np.int64)
    for x0 in range(0, p, 1024):
        xs = np.arange(x0, min(p, x0 + 1024), dtype=np.int64)
        cubes = (xs * xs % p) * xs % p
        f = (cubes[:, None] + xs[:, None] * A[None, :] + B[None, :]) % p
        acc += chi[f].sum(axis=0, dtype=np.int64)
    return -acc


@lru_cache(maxsize=None)
def trace_table(p: int) -> np.ndarray:
    """(p, p) table of traces indexed [A, B]; SINGULAR marks bad reduction.

    For each A the map B -> sum_x chi(x^3 + Ax + B) is a cyclic
    cross-correlation of the value histogram of x^3 + Ax with chi, done by
    FFT.  Values are bounded by p, far inside float64 exactness.
    """
    x = np.arange(p, dtype=np.int64)
    chi = chi_table(p).astype(np.float64)
    chi_f = np.fft.rfft(chi)
    table = np.empty((p, p), dtype=np.int32)
    chunk = max(1, 2 ** 22 // p)
    for a0 in range(0, p, chunk):
        As = np.arange(a0, min(p, a0 + chunk), dtype=np.int64)
        vals = ((x * x % p) * x + As[:, None] * x) % p
        rows = len(As)
        hist = np.zeros((rows, p), dtype=np.float64)
        np.add.at(hist, (np.repeat(np.arange(rows), p), vals.ravel()), 1.0)
        corr = np.fft.irfft(np.conj(np.fft.rfft(hist, axis=1)) * chi_f, n=p,
                            axis=1)
        table[a0: a0 + rows] = np.rint(-corr).astype(np.int32)
    bad = singular_mask(p, *np.meshgrid(np.arange(p), np.arange(p),
                                        indexing="ij"))
    table[bad] = SINGULAR
    return table


def curve_points(p: int, A: int, B: int):
    """All points of y^2 = x^3 + Ax + B over F_p as (X, Y, Z) arrays,
    including O = (0, 1, 0)."""
    x = np.arange(p, dtype=np.int64)
    f = ((x * x % p) * x + A * x + B) % p
    r = sqrt_table(p)[f]
    on = r >= 0
    xs, rs = x[on], r[on]
    flip = rs != 0
    X = np.concatenate(([0], xs, xs[flip]))
    Y = np.concatenate(([1], rs, (p - rs[flip])))
    Z = np.concatenate(([0], np.ones(len(xs), dtype=np.int64),
                        np.ones(int(flip.sum()), dtype=np.int64)))
    return X, Y, Z


def _vadd(P, Q, A, B, p):
    """Complete vectorized addition; P, Q are (X, Y, Z) array triples on the
    per-row curves (A, B)."""
    X1, Y1, Z1 = P
    X2, Y2, Z2 = Q
    # pairwise monomials, all reduced mod p
    xx1, xy1, xz1 = X1 * X1 % p, X1 * Y1 % p, X1 * Z1 % p
    yy1, yz1, zz1 = Y1 * Y1 % p, Y1 * Z1 % p, Z1 * Z1 % p
    xx2, xy2, xz2 = X2 * X2 % p, X2 * Y2 % p, X2 * Z2 % p
    yy2, yz2, zz2 = Y2 * Y2 % p, Y2 * Z2 % p, Z2 * Z2 % p
    aa = A * A % p
    bb = B * B % p
    X3 = (A * (xx1 * yz2 + 2 * xy1 * xz2 + 2 * xz1 * xy2 + yz1 * xx2)
          - xy1 * yy2 - yy1 * xy2
          + 3 * B * ((xy1 * zz2 + 2 * xz1 * yz2 + 2 * yz1 * xz2 + zz1 * xy2) % p)
          - aa * (yz1 * zz2 + zz1 * yz2)) % p
    Y3 = (-3 * A * (xx1 * xx2 % p)
          - 9 * B * ((xx1 * xz2 + xz1 * xx2) % p)
          + aa * ((xx1 * zz2 + 4 * xz1 * xz2 + zz1 * xx2) % p)
          + 3 * (A * B % p) * ((xz1 * zz2 + zz1 * xz2) % p)
          - yy1 * yy2
          + ((9 * bb + aa * A) % p) * (zz1 * zz2 % p)) % p
    Z3 = (-3 * (xx1 * xy2 + xy1 * xx2)
          - A * (xy1 * zz2 + 2 * xz1 * yz2 + 2 * yz1 * xz2 + zz1 * xy2)
          - yy1 * yz2 - yz1 * yy2
          - 3 * B * ((yz1 * zz2 + zz1 * yz2) % p)) % p
    X3, Y3, Z3 = (-X3) % p, (-Y3) % p, (-Z3) % p
    bad = (X3 == 0) & (Y3 == 0) & (Z3 == 0)
    if np.any(bad):
        idx = np.nonzero(bad)[0]
        Ab = A[idx] if np.ndim(A) else A
        Bb = B[idx] if np.ndim(B) else B
        x1, y1, z1 = X1[idx], Y1[idx], Z1[idx]
        x2, y2, z2 = X2[idx], Y2[idx], Z2[idx]
        xx1b, xy1b, xz1b = x1 * x1 % p, x1 * y1 % p, x1 * z1 % p
        yy1b, yz1b, zz1b = y1 * y1 % p, y1 * z1 % p, z1 * z1 % p
        xx2b, xy2b, xz2b = x2 * x2 % p, x2 * y2 % p, x2 * z2 % p
        yy2b, yz2b, zz2b = y2 * y2 % p, y2 * z2 % p, z2 * z2 % p
        X3[idx] = (Ab * (xx1b * zz2b - zz1b * xx2b)
                   - 2 * xy1b * yz2b - xz1b * yy2b
                   + yy1b * xz2b + 2 * yz1b * xy2b
                   + 3 * Bb * ((xz1b * zz2b - zz1b * xz2b) % p)) % p
        Y3[idx] = (3 * (xx1b * xy2b - xy1b * xx2b)
                   + Ab * (2 * xz1b * yz2b - xy1b * zz2b
                           - 2 * yz1b * xz2b + zz1b * xy2b)
                   + yy1b * yz2b - yz1b * yy2b
                   + 3 * Bb * ((zz1b * yz2b - yz1b * zz2b) % p)) % p
        Z3[idx] = (3 * (xz1b * xx2b - xx1b * xz2b)
                   + Ab * (zz1b * xz2b - xz1b * zz2b)
                   + yy1b * zz2b - zz1b * yy2b) % p
    return X3, Y3, Z3


def vec_scalar_mul(p: int, A, B, m, P):
    """Per-row m*P for arrays of points; m may be a scalar or per-row array."""
    X, Y, Z = P
    n = len(X)
    m = np.broadcast_to(np.asarray(m, dtype=np.int64), (n,)).copy()
    accX = np.zeros(n, dtype=np.int64)
    accY = np.ones(n, dtype=np.int64)
    accZ = np.zeros(n, dtype=np.int64)
    maxm = int(m.max(initial=0))
    baseX, baseY, baseZ = X % p, Y % p, Z % p
    while maxm:
        bit = (m & 1).astype(bool)
        if np.any(bit):
            sX, sY, sZ = _vadd((accX, accY, accZ), (baseX, baseY, baseZ),
                               A, B, p)
            accX = np.where(bit, sX, accX)
            accY = np.where(bit, sY, accY)
            accZ = np.where(bit, sZ, accZ)
        m >>= 1
        maxm >>= 1
        if maxm:
            baseX, baseY, baseZ = _vadd((baseX, baseY, baseZ),
                                        (baseX, baseY, baseZ), A, B, p)
    return accX, accY, accZ


def is_zero(p: int, P) -> np.ndarray:
    """Rowwise test for the identity (projectively: X = Z = 0)."""
    X, _, Z = P
    return (X % p == 0) & (Z % p == 0)


def annihilates(p: int, A: int, B: int, m: int) -> bool:
    """True iff m * P = O for every point P of the curve mod p."""
    pts = curve_points(p, A, B)
    return bool(np.all(is_zero(p, vec_scalar_mul(p, A, B, m, pts))))


def _exponent_candidates(p: int, N: int) -> list:
    """Ascending divisors d of N that can be the exponent of a group
    Z/n1 x Z/n2 of order N over F_p (n1 = N/d | d and n1 | p-1)."""
    return [d for d in factorize(N).divisors()
            if d % (N // d) == 0 and (p - 1) % (N // d) == 0]


def exponent_of_curve(p: int, A: int, B: int, N: int = None) -> int:
    """Group exponent of E(F_p): smallest admissible divisor of N that
    annihilates every point."""
    if N is None:
        N = p + 1 - int(traces_of(p, [A], [B])[0])
    for d in _exponent_candidates(p, N):
        if annihilates(p, A, B, d):
            return d
    raise RuntimeError("no exponent candidate annihilated the curve")


@lru_cache(maxsize=None)
def exponent_table(p: int) -> np.ndarray:
    """(p, p) table of group exponents indexed [A, B] (SINGULAR where bad).

    Exponents are computed once per isomorphism orbit (A, B) ~ (u^4 A, u^6 B)
    with batched candidate checks across all orbit representatives.
    """
    tt = trace_table(p)
    table = np.full((p, p), -1, dtype=np.int32)
    table[tt == SINGULAR] = SINGULAR
    us = np.arange(1, p, dtype=np.int64)
    u4 = us ** 4 % p
    u6 = u4 * us % p * us % p
    reps = []
    for A in range(p):
        row = table[A]
        for B in range(p):
            if row[B] != -1:
                continue
            reps.append((A, B, p + 1 - int(tt[A, B])))
            table[u4 * A % p, u6 * B % p] = -2  # claim the orbit
    # batched candidate rounds over all representatives
    pending = []
    for A, B, N in reps:
        X, Y, Z = curve_points(p, A, B)
        pending.append([A, B, _exponent_candidates(p, N), X, Y, Z])
    results = {}
    while pending:
        Xs = np.concatenate([e[3] for e in pending])
        Ys = np.concatenate([e[4] for e in pending])
        Zs = np.concatenate([e[5] for e in pending])
        Av = np.concatenate([np.full(len(e[3]), e[0], dtype=np.int64)
                             for e in pending])
        Bv = np.concatenate([np.full(len(e[3]), e[1], dtype=np.int64)
                             for e in pending])
        mv = np.concatenate([np.full(len(e[3]), e[2][0], dtype=np.int64)
                             for e in pending])
        zero = is_zero(p, vec_scalar_mul(p, Av, Bv, mv, (Xs, Ys, Zs)))
        nxt = []
        pos = 0
        for e in pending:
            npts = len(e[3])
            if bool(np.all(zero[pos: pos + npts])):
                results[(e[0], e[1])] = e[2][0]
            else:
                e[2] = e[2][1:]
                nxt.append(e)
            pos += npts
        pending = nxt
    for (A, B), exp in results.items():
        table[u4 * A % p, u6 * B % p] = exp
    assert not np.any(table < 0)
    return table


def order_lcm_of_curve(p: int, A: int, B: int, N: int = None) -> int:
    """Exponent of E(F_p) computed as the lcm of the orders of all points
    (per-prime peeling); an independent route from exponent_of_curve."""
    if N is None:
        N = p + 1 - int(traces_of(p, [A], [B])[0])
    pts = curve_points(p, A, B)
    L = 1
    for q, e in factorize(N).factors:
        T = vec_scalar_mul(p, A, B, N // q ** e, pts)
        v = 0
        while not np.all(is_zero(p, T)):
            T = vec_scalar_mul(p, A, B, q, T)
            v += 1
        L *= q ** v
    return L
