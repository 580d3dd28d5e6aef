"""Brute-force verifiers for the short-interval counting lemmas and the
Baker-cutoff computation."""

from collections import Counter
from dataclasses import dataclass
from math import isqrt, log

from .arith import factorize, multiplicative_profile
from .curves import trace_prime_power


@dataclass(frozen=True)
class IntervalCountReport:
    x: int
    window: tuple          # inclusive (lo, hi)
    parameter: object      # k, P, or c
    count: int
    bound: float           # the bound formula evaluated with C = 1
    fitted_constant: float  # count / bound
    passed: bool           # count <= constant * bound, when a constant given


def _report(x, window, parameter, count, bound, constant=None):
    ratio = count / bound if bound > 0 else float("inf") if count else 0.0
    passed = True if constant is None else count <= constant * bound
    return IntervalCountReport(x, window, parameter, count, bound, ratio,
                               passed)


def count_e_small(x: int, k: int, constant: float = None) -> IntervalCountReport:
    """#{n in [x, x + sqrt(x)] : e(n) < n/k}, against sqrt(x)/k + x^(1/3) log^3 x."""
    if x < 1 or k < 1:
        raise ValueError("x and k must be >= 1")
    lo, hi = x, x + isqrt(x)
    count = 0
    for n in range(lo, hi + 1):
        e = multiplicative_profile(factorize(n)).e_value
        if k * e < n:
            count += 1
    bound = isqrt(x) / k + x ** (1 / 3) * log(x) ** 3
    return _report(x, (lo, hi), k, count, bound, constant)


def p_part(n: int, primes) -> int:
    """Largest divisor of n composed only of the given primes."""
    t = 1
    for p in primes:
        while n % p == 0:
            n //= p
            t *= p
    return t


def count_smooth_factor_interval(x: int, P, constant: float = None
                                 ) -> IntervalCountReport:
    """#{n in [x, x + sqrt(x)] : the P-part of n exceeds x^(1/3)}, against
    |P| + sqrt(x) log|P| / log x."""
    P = sorted(set(P))
    lo, hi = x, x + isqrt(x)
    count = 0
    for n in range(lo, hi + 1):
        if p_part(n, P) ** 3 > x:
            count += 1
    bound = len(P) + isqrt(x) * log(max(len(P), 2)) / log(x)
    return _report(x, (lo, hi), tuple(P), count, bound, constant)


def count_large_prime_factor(x: int, c: float,
                             constant: float = None) -> IntervalCountReport:
    """#{n in [x, x + 0.1 sqrt(x)] : P+(n) > x^(1/2+c)}, against c*sqrt(x)
    (a lower bound: passed means count >= constant * bound)."""
    if not 0 < c < 0.5:
        raise ValueError("c must lie in (0, 1/2)")
    lo, hi = x, x + isqrt(x) // 10
    threshold = (0.5 + c) * log(x)
    count = 0
    for n in range(lo, hi + 1):
        if log(factorize(n).factors[-1][0]) > threshold:
            count += 1
    bound = c * isqrt(x)
    ratio = count / bound if bound else 0.0
    passed = True if constant is None else count >= constant * bound
    return IntervalCountReport(x, (lo, hi), c, count, bound, ratio, passed)


# --- Vaughan's identity, checked symbolically over the basis {log p} -------

def _lambda_vec(m: int) -> Counter:
    """Von Mangoldt Lambda(m) as a {log p} coefficient vector."""
    f = factorize(m).factors
    if len(f) == 1:
        return Counter({f[0][0]: 1})
    return Counter()


def _log_vec(h: int) -> Counter:
    """log h as a {log p} coefficient vector."""
    return Counter({p: e for p, e in factorize(h).factors})


def _mu(d: int) -> int:
    f = factorize(d).factors
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def vaughan_identity_check(n: int, U: int, V: int) -> bool:
    """Exact check of the three-sum decomposition of Lambda(n):

    Lambda(n) = - sum_{mdr=n, m<=U, d<=V} Lambda(m) mu(d)
                + sum_{hd=n, d<=V} mu(d) log h
                - sum_{mk=n, m>U, k>1} Lambda(m) sum_{d|k, d<=V} mu(d)
    """
    if U >= n:
        raise ValueError("requires U < n")
    lhs = _lambda_vec(n)
    rhs = Counter()
    for m in range(1, min(U, n) + 1):
        if n % m:
            continue
        lam = _lambda_vec(m)
        if not lam:
            continue
        rest = n // m
        for d in range(1, min(V, rest) + 1):
            if rest % d:
                continue
            mu = _mu(d)
            for p, c in lam.items():
                rhs[p] -= mu * c
    for d in range(1, min(V, n) + 1):
        if n % d:
            continue
        mu = _mu(d)
        if mu:
            for p, c in _log_vec(n // d).items():
                rhs[p] += mu * c
    for m in range(U + 1, n + 1):
        if n % m:
            continue
        lam = _lambda_vec(m)
        if not lam:
            continue
        k = n // m
        if k <= 1:
            continue
        inner = sum(_mu(d) for d in range(1, min(V, k) + 1) if k % d == 0)
        for p, c in lam.items():
            rhs[p] -= inner * c
    return +lhs == +rhs  # unary + drops zero entries


def baker_cutoff(p: int) -> int:
    """K(p) = ceil(3*10^20 * log p * (46 + log log p)); the inner factor is
    clamped at 46 for p = 2 where log log p is negative."""
    if p < 2:
        raise ValueError("p must be >= 2")
    inner = 46 + max(0.0, log(log(p)))
    v = 3 * 10 ** 20 * log(p) * inner
    return int(v) + (v != int(v))


def lucas_ones(p: int, a: int, K: int) -> set:
    """All k <= K with V_k(a, p) = 1 in the Lucas recurrence V0=2, V1=a."""
    if a * a > 4 * p:
        raise ValueError("|a| must be at most 2 sqrt(p)")
    if K > 10 ** 4:
        raise ValueError("K too large (values grow like p^(k/2))")
    out = set()
    v0, v1 = 2, a
    for k in range(1, K + 1):
        if v1 == 1:
            out.add(k)
        v0, v1 = v1, a * v1 - p * v0
    return out
