"""Exact integer arithmetic: factorization, multiplicative statistics, CRT,
Jacobi symbols, smooth counting.

Everything here is pure integer arithmetic -- no floats.
"""

from dataclasses import dataclass
from math import gcd, isqrt, prod

# Witnesses sufficient for deterministic Miller-Rabin below 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by a sieve of Eratosthenes."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i:: i] = bytearray(len(sieve[i * i:: i]))
    return [i for i in range(2, n + 1) if sieve[i]]


def smallest_prime_factors(n: int) -> list[int]:
    """spf[m] = smallest prime factor of m, for 0 <= m <= n (spf[0]=spf[1]=0)."""
    spf = list(range(n + 1))
    if n >= 1:
        spf[1] = 0
    for i in range(2, isqrt(n) + 1):
        if spf[i] == i:
            for j in range(i * i, n + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its full prime factorization."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("value must be a positive integer")
        v = 1
        last = 1
        for p, e in self.factors:
            if p <= last:
                raise ValueError("primes must be strictly increasing")
            if e < 1:
                raise ValueError("exponents must be >= 1")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            v *= p ** e
            last = p
        if v != self.value:
            raise ValueError("factorization does not multiply out to value")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def nu(self, p: int) -> int:
        """The p-adic valuation of value."""
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def is_prime_power(self) -> bool:
        return len(self.factors) == 1

    def divisors(self) -> list[int]:
        """All divisors, ascending."""
        ds = [1]
        for p, e in self.factors:
            ds = [d * p ** i for d in ds for i in range(e + 1)]
        return sorted(ds)


def factorize(n: int) -> FactoredInteger:
    """Trial-division factorization, deterministic; intended for n <= ~10^12."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    m = n
    factors = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            factors.append((d, e))
        d += 1 if d == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return FactoredInteger(n, tuple(factors))


@dataclass(frozen=True)
class MultiplicativeProfile:
    gamma: int          # squarefree kernel, product of distinct primes
    e_value: int        # multiplicative, e(p^k) = p^ceil(k/2)
    omega: int          # number of distinct primes
    big_omega: int      # number of primes with multiplicity
    p_plus: int         # largest prime factor (1 for n = 1)
    powerful_part: int  # product of p^e over exponents >= 2


def multiplicative_profile(n: FactoredInteger) -> MultiplicativeProfile:
    fs = n.factors
    return MultiplicativeProfile(
        gamma=prod(p for p, _ in fs),
        e_value=prod(p ** ((e + 1) // 2) for p, e in fs),
        omega=len(fs),
        big_omega=sum(e for _, e in fs),
        p_plus=fs[-1][0] if fs else 1,
        powerful_part=prod(p ** e for p, e in fs if e >= 2),
    )


def e_function(n: int) -> int:
    """e(n) = prod p^ceil(k/2): divides the exponent of any two-generated
    abelian group of order n."""
    return multiplicative_profile(factorize(n)).e_value


def crt_combine(residues: list[tuple[int, int]]) -> int:
    """Combine (residue, modulus) pairs with pairwise coprime moduli into the
    unique representative in [0, prod moduli)."""
    mods = [m for _, m in residues]
    for i in range(len(mods)):
        for j in range(i + 1, len(mods)):
            if gcd(mods[i], mods[j]) != 1:
                raise ValueError(
                    f"moduli {mods[i]} and {mods[j]} are not coprime")
    x, m = 0, 1
    for r, q in residues:
        # solve x' = x (mod m), x' = r (mod q)
        t = ((r - x) * pow(m, -1, q)) % q
        x += m * t
        m *= q
    return x % m


def jacobi_symbol(a: int, m: int) -> int:
    """Jacobi symbol (a/m) for odd positive m."""
    if m <= 0 or m % 2 == 0:
        raise ValueError("modulus must be odd and positive")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of a mod odd prime p, or None (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def kronecker_symbol(a: int, m: int) -> int:
    """Kronecker symbol (a/m) for positive m (extends Jacobi to even m)."""
    if m <= 0:
        raise ValueError("modulus must be positive")
    t = 0
    while m % 2 == 0:
        m //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        two = 1 if a % 8 in (1, 7) else -1
        return (two ** t) * jacobi_symbol(a, m)
    return jacobi_symbol(a, m)


def smooth_count(x: int, y: int) -> int:
    """Psi(x, y): the number of integers n <= x all of whose prime factors
    are <= y (n = 1 counts)."""
    if x < 1 or y < 1:
        raise ValueError("x and y must be >= 1")
    ps = primes_up_to(min(x, y))

    def dfs(limit: int, idx: int) -> int:
        total = 1  # n = 1
        for i in range(idx + 1):
            p = ps[i]
            if p > limit:
                break
            power = p
            while power <= limit:
                total += dfs(limit // power, i - 1)
                power *= p
        return total

    return dfs(x, len(ps) - 1)


def tau3(n: FactoredInteger) -> int:
    """Number of ordered triples (d1, d2, d3) with d1*d2*d3 = n."""
    return prod((e + 1) * (e + 2) // 2 for _, e in n.factors)
