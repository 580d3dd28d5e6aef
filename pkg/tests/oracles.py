"""Independent brute-force oracles shared by the test suite.

Everything here avoids the library's fast paths: extension-field point
counting uses plain polynomial arithmetic, and the group-exponent oracle
derives the exponent from enumerated point orders only.
"""

import random
from math import gcd, lcm

from ellcarm.arith import factorize
from ellcarm.curves import O, enumerate_points, scalar_mul


# --- F_{p^k} arithmetic via polynomials mod an irreducible ------------------

def _poly_mul(f, g, p):
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        for j, gj in enumerate(g):
            out[i + j] = (out[i + j] + fi * gj) % p
    return out


def _poly_mod(f, mod, p):
    f = list(f)
    k = len(mod) - 1
    inv = pow(mod[-1], -1, p)
    for i in range(len(f) - 1, k - 1, -1):
        c = f[i] * inv % p
        if c:
            for j in range(k + 1):
                f[i - k + j] = (f[i - k + j] - c * mod[j]) % p
    return tuple(f[:k])


def _find_irreducible(p, k):
    # for k in {2, 3} irreducible over F_p is equivalent to having no roots
    assert k in (2, 3)
    for tail in range(p ** k):
        coeffs = [(tail // p ** i) % p for i in range(k)] + [1]
        if all(sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p
               for x in range(p)):
            return coeffs
    raise AssertionError("no irreducible polynomial found")


class ExtField:
    """F_{p^k} with elements as coefficient tuples of length k."""

    def __init__(self, p, k):
        self.p, self.k = p, k
        self.mod = _find_irreducible(p, k)
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)

    def embed(self, a):
        return (a % self.p,) + (0,) * (self.k - 1)

    def add(self, f, g):
        return tuple((a + b) % self.p for a, b in zip(f, g))

    def mul(self, f, g):
        return _poly_mod(_poly_mul(list(f), list(g), self.p), self.mod,
                         self.p)

    def pow(self, f, e):
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, f)
            f = self.mul(f, f)
            e >>= 1
        return r

    def elements(self):
        p, k = self.p, self.k
        for idx in range(p ** k):
            yield tuple((idx // p ** i) % p for i in range(k))

    def is_square(self, f):
        if f == self.zero:
            return True
        return self.pow(f, (self.p ** self.k - 1) // 2) == self.one


def ext_field_count(p, k, A, B):
    """#E(F_{p^k}) for y^2 = x^3 + Ax + B, counted pointwise."""
    F = ExtField(p, k)
    Ae, Be = F.embed(A), F.embed(B)
    total = 1  # point at infinity
    for x in F.elements():
        rhs = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(Ae, x)), Be)
        if rhs == F.zero:
            total += 1
        elif F.is_square(rhs):
            total += 2
    return total


# --- group exponent from enumerated points ----------------------------------

def group_exponent_oracle(curve, rng=None):
    """Exponent of the point group, from point orders only: lcm of orders of
    a sample, extended until it annihilates every enumerated point, then
    checked minimal prime-by-prime."""
    rng = rng or random.Random(0)
    pts = enumerate_points(curve)
    M = len(pts)
    m_primes = factorize(M).primes

    def order(P):
        o = M
        for q in m_primes:
            while o % q == 0 and scalar_mul(curve, o // q, P) == O:
                o //= q
        return o

    L = 1
    for P in rng.sample(pts, min(40, len(pts))):
        L = lcm(L, order(P))
    for P in pts:
        if scalar_mul(curve, L, P) != O:
            L = lcm(L, order(P))
    for q in factorize(L).primes:
        m = L // q
        assert any(scalar_mul(curve, m, P) != O for P in pts), \
            "exponent oracle produced a non-minimal annihilator"
    return L


def hasse_intervals_overlap(p1, p2):
    """Whether the admissible point-count ranges of two primes intersect."""
    from math import isqrt
    lo1, hi1 = p1 + 1 - 2 * isqrt(p1), p1 + 1 + 2 * isqrt(p1)
    lo2, hi2 = p2 + 1 - 2 * isqrt(p2), p2 + 1 + 2 * isqrt(p2)
    return max(lo1, lo2) <= min(hi1, hi2)


def brute_divisor_triples(n):
    return sum(1 for a in range(1, n + 1) if n % a == 0
               for b in range(1, n // a + 1) if (n // a) % b == 0)


def brute_smooth_count(x, y):
    def largest_prime(n):
        q, d = 1, 2
        while d * d <= n:
            while n % d == 0:
                q, n = d, n // d
            d += 1
        return max(q, n) if n > 1 else q
    return sum(1 for n in range(1, x + 1) if largest_prime(n) <= y)
