"""Random-curve sampling, exact and Monte-Carlo estimates of the probability
that n is elliptic Carmichael, structural classifiers of n, the trichotomy
checker, and the decay experiments."""

import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt, log, prod, sqrt

import numpy as np

from . import bulk
from .arith import FactoredInteger, e_function, factorize
from .curves import (CurveModN, WeierstrassCurve, good_reduction,
                     exponent_mod_prime_power, reduce_mod_prime, scalar_mul,
                     short_curve, trace, trace_data, trace_prime_power, O)

_MASK64 = (1 << 64) - 1


def substream_seed(seed: int, worker: int) -> int:
    """Derive an independent 64-bit substream seed (splitmix64 finalizer)."""
    x = (seed + (worker + 1) * 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def wilson_interval(successes: int, samples: int, z: float = 1.96):
    """95% Wilson score interval for a binomial proportion."""
    if samples <= 0:
        raise ValueError("samples must be positive")
    phat = successes / samples
    denom = 1 + z * z / samples
    center = (phat + z * z / (2 * samples)) / denom
    half = z * sqrt(phat * (1 - phat) / samples
                    + z * z / (4 * samples * samples)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class ProbabilityEstimate:
    n: int
    mode: str                     # "exact" | "monte-carlo"
    numerator: int = None
    denominator: int = None
    successes: int = None
    samples: int = None
    lower: float = None
    upper: float = None
    seed: int = None
    workers: int = None

    @property
    def value(self) -> float:
        if self.mode == "exact":
            return self.numerator / self.denominator
        return self.successes / self.samples


# --- sampling ---------------------------------------------------------------

def sample_curve(n: FactoredInteger, rng: random.Random) -> CurveModN:
    """Uniform good-reduction curve mod n: componentwise rejection over
    coefficients mod p^e, short form for p >= 5 and long form at 2 and 3."""
    comps = []
    for p, e in n.factors:
        q = p ** e
        while True:
            if p in (2, 3):
                c = WeierstrassCurve(q, tuple(rng.randrange(q)
                                              for _ in range(5)))
            else:
                c = short_curve(q, rng.randrange(q), rng.randrange(q))
            if good_reduction(c):
                comps.append((p, e, c))
                break
    return CurveModN(n, tuple(comps))


def _sample_pairs(p: int, e: int, size: int, rng) -> tuple:
    """size good-reduction (A, B) pairs mod p^e as int64 arrays."""
    q = p ** e
    A = rng.integers(0, q, size, dtype=np.int64)
    B = rng.integers(0, q, size, dtype=np.int64)
    bad = bulk.singular_mask(p, A % p, B % p)
    while np.any(bad):
        idx = np.nonzero(bad)[0]
        A[idx] = rng.integers(0, q, len(idx), dtype=np.int64)
        B[idx] = rng.integers(0, q, len(idx), dtype=np.int64)
        bad[idx] = bulk.singular_mask(p, A[idx] % p, B[idx] % p)
    return A, B


@lru_cache(maxsize=4096)
def _small_component_data(p: int, e: int, coeffs: tuple):
    """(a_{p^e}, exponent mod p^e) for a long-form component at p in {2,3}."""
    c = WeierstrassCurve(p ** e, coeffs)
    a_p = trace(reduce_mod_prime(c, p))
    return trace_prime_power(a_p, p, e), exponent_mod_prime_power(c, p, e)


def _lucas_vec(t: np.ndarray, p: int, k: int) -> np.ndarray:
    v0 = np.full_like(t, 2)
    v1 = t.astype(np.int64).copy()
    for _ in range(k - 1):
        v0, v1 = v1, t * v1 - p * v0
    return v1 if k >= 1 else v0


def _first_points(p: int, A: int, B: int, count: int):
    st = bulk.sqrt_table(p)
    pts = []
    for x in range(p):
        r = int(st[(x * x % p * x + A * x + B) % p])
        if r >= 0:
            pts.append((x, r, 1))
            if len(pts) >= count:
                break
    return pts


@lru_cache(maxsize=8192)
def _lift_exponent(p: int, e: int, A: int, B: int) -> int:
    """exp(E(Z/p^eZ)) for a specific short-form lift (A, B) mod p^e."""
    return exponent_mod_prime_power(short_curve(p ** e, A, B), p, e)


def _big_anomalous_split(p: int, e: int, A: int, B: int) -> bool:
    """For a_p = 1 beyond the table range: is the Sylow p-subgroup mod p^e
    the split Z/p x Z/p^(e-1) rather than cyclic?  Sampled lifted points
    (each non-split curve exposes itself with probability 1 - 1/p per
    point, so 16 agreeing samples leave error below p^-16)."""
    from .carmichael import _random_point
    curve = short_curve(p ** e, A, B)
    comp = WeierstrassCurve(p ** e, (A % p ** e, B % p ** e))
    rng = random.Random((A * p + B) ^ 0x9E3779B9)
    m = p ** (e - 1)  # group order is p^e here; prime-to-p part is 1
    for _ in range(16):
        P = _random_point(comp, p, e, rng)
        if scalar_mul(curve, m, P) != O:
            return False
    return True


def _big_component_ok(p: int, e: int, A: int, B: int, N: int, m: int) -> bool:
    """Does exp(E(Z/p^eZ)) divide m, for p beyond the table range?
    Point-based: a few quick witnesses, then a full batched annihilation
    check; anomalous lifts (p | N, possible only for a_p = 1) may drop one
    factor p from the usual p^{e-1} growth."""
    pe1 = p ** (e - 1)
    if e >= 2 and N % p == 0:
        # a_p = 1, N = p: exponent is p^e (cyclic) or p^(e-1) (split)
        if m % p ** e == 0:
            return True
        return m % pe1 == 0 and _big_anomalous_split(p, e, A, B)
    if m % pe1:
        return False
    s = (m // pe1) % N
    if s == 0:
        return True  # exp | N | m/p^{e-1}
    c = short_curve(p, A % p, B % p)
    for P in _first_points(p, A % p, B % p, 4):
        if scalar_mul(c, s, P) != O:
            return False
    return bulk.annihilates(p, A % p, B % p, s)


def _criterion_mask(n: FactoredInteger, comps) -> np.ndarray:
    """Vectorized criterion test.  comps is a list of
    (p, e, A_array, B_array) with arrays mod p^e (short form, p >= 5) or
    (p, e, list-of-coeff-tuples) for p in {2, 3}."""
    nv = n.value
    size = None
    data = []  # (p, e, a_pe array, extra) where extra drives the exp check
    for item in comps:
        p, e = item[0], item[1]
        if p in (2, 3):
            rows = item[2]
            ae = np.empty(len(rows), dtype=np.int64)
            E = np.empty(len(rows), dtype=np.int64)
            for i, coeffs in enumerate(rows):
                ae[i], E[i] = _small_component_data(p, e, tuple(coeffs))
            data.append((p, e, ae, ("small", E)))
            size = len(rows)
        else:
            A0, B0 = item[2] % p ** e, item[3] % p ** e
            A, B = A0 % p, B0 % p
            size = len(A)
            if p <= bulk.TABLE_MAX:
                t = bulk.trace_table(p)[A, B].astype(np.int64)
                E = p ** (e - 1) * bulk.exponent_table(p)[A, B].astype(np.int64)
                if e >= 2:
                    # anomalous lifts (p | p+1-a_p) may have a factor-p
                    # smaller exponent; resolve them individually
                    for i in np.nonzero((p + 1 - t) % p == 0)[0]:
                        E[i] = _lift_exponent(p, e, int(A0[i]), int(B0[i]))
                data.append((p, e, _lucas_vec(t, p, e), ("table", E)))
            else:
                t = bulk.traces_of(p, A, B)
                data.append((p, e, _lucas_vec(t, p, e),
                             ("big", A0, B0, p + 1 - t)))
    a_n = np.ones(size, dtype=np.int64)
    for _, _, ae, _ in data:
        a_n *= ae
    m = nv + 1 - a_n
    ok = np.ones(size, dtype=bool)
    for p, e, _, extra in sorted(data, key=lambda d: d[0]):
        if extra[0] in ("small", "table"):
            E = extra[1]
            ok &= (m % E) == 0
        else:
            _, A, B, N = extra
            for i in np.nonzero(ok)[0]:
                if not _big_component_ok(p, e, int(A[i]), int(B[i]),
                                         int(N[i]), int(m[i])):
                    ok[i] = False
    return ok


def _sampled_mask(n: FactoredInteger, size: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    comps = []
    for p, e in n.factors:
        if p in (2, 3):
            q = p ** e
            pyrng = random.Random(seed ^ (0x5DEECE66D * p))
            rows = []
            for _ in range(size):
                while True:
                    coeffs = tuple(pyrng.randrange(q) for _ in range(5))
                    if good_reduction(WeierstrassCurve(q, coeffs)):
                        rows.append(coeffs)
                        break
            comps.append((p, e, rows))
        else:
            A, B = _sample_pairs(p, e, size, rng)
            comps.append((p, e, A, B))
    return _criterion_mask(n, comps)


def estimate_probability(n: FactoredInteger, samples: int, seed: int,
                         workers: int = 1) -> ProbabilityEstimate:
    """Monte-Carlo estimate of P(n is E-Carmichael) for uniform good E,
    reproducible from (seed, samples, workers)."""
    if n.is_prime_power():
        raise ValueError("n must not be a prime power")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    successes = 0
    for w in range(workers):
        share = samples // workers + (1 if w < samples % workers else 0)
        if share == 0:
            continue
        successes += int(_sampled_mask(n, share,
                                       substream_seed(seed, w)).sum())
    lo, hi = wilson_interval(successes, samples)
    return ProbabilityEstimate(n.value, "monte-carlo", successes=successes,
                               samples=samples, lower=lo, upper=hi,
                               seed=seed, workers=workers)


def exact_probability(n: FactoredInteger,
                      bound: int = 10 ** 4) -> ProbabilityEstimate:
    """Exact #{good (A,B) mod n passing the criterion} / #{good (A,B)}."""
    if n.is_prime_power():
        raise ValueError("n must not be a prime power")
    if gcd(n.value, 6) != 1:
        raise ValueError("exact sweep requires gcd(n, 6) = 1")
    if n.value > bound:
        raise ValueError(f"n exceeds the exhaustive bound {bound}; "
                         "use estimate_probability instead")
    nv = n.value
    comp = []
    denominator = 1
    for p, e in n.factors:
        tt = bulk.trace_table(p)
        et = bulk.exponent_table(p)
        good = tt != bulk.SINGULAR
        t = tt[good].astype(np.int64)
        E = p ** (e - 1) * et[good].astype(np.int64)
        a = _lucas_vec(t, p, e)
        # each base row stands for its p^(2(e-1)) lifts mod p^e
        w = np.full(len(t), p ** (2 * (e - 1)), dtype=np.int64)
        if e >= 2:
            # anomalous rows: their lifts do not all share one exponent;
            # expand them into per-exponent rows
            Ai, Bi = np.nonzero(good)
            xa, xE, xw = [], [], []
            for i in np.nonzero((p + 1 - t) % p == 0)[0]:
                counts = {}
                for da in range(p ** (e - 1)):
                    for db in range(p ** (e - 1)):
                        Ee = _lift_exponent(p, e, int(Ai[i]) + p * da,
                                            int(Bi[i]) + p * db)
                        counts[Ee] = counts.get(Ee, 0) + 1
                w[i] = 0
                for Ee, cnt in counts.items():
                    xa.append(int(a[i]))
                    xE.append(Ee)
                    xw.append(cnt)
            if xa:
                keep = w > 0
                a = np.concatenate([a[keep], np.array(xa, dtype=np.int64)])
                E = np.concatenate([E[keep], np.array(xE, dtype=np.int64)])
                w = np.concatenate([w[keep], np.array(xw, dtype=np.int64)])
        denominator *= int(w.sum())
        comp.append((a, E, w))
    comp.sort(key=lambda c: len(c[0]))
    # cartesian product over components, chunked along the largest one
    small, big = comp[:-1], comp[-1]
    a_pre = np.ones(1, dtype=np.int64)
    w_pre = np.ones(1, dtype=np.int64)
    E_pre = []  # per small component, expanded to the prefix length
    for a, E, w in small:
        k = len(a)
        a_pre = (a_pre[:, None] * a[None, :]).ravel()
        w_pre = (w_pre[:, None] * w[None, :]).ravel()
        E_pre = [np.repeat(Eo, k) for Eo in E_pre]
        E_pre.append(np.tile(E, len(a_pre) // k))
    a_big, E_big, w_big = big
    numerator = 0
    chunk = max(1, 2 ** 22 // max(1, len(a_pre)))
    for lo_i in range(0, len(a_big), chunk):
        ab = a_big[lo_i: lo_i + chunk]
        Eb = E_big[lo_i: lo_i + chunk]
        wb = w_big[lo_i: lo_i + chunk]
        m = nv + 1 - a_pre[:, None] * ab[None, :]
        ok = (m % Eb[None, :]) == 0
        for Eo in E_pre:
            ok &= (m % Eo[:, None]) == 0
        numerator += int((ok * (w_pre[:, None] * wb[None, :])).sum())
    return ProbabilityEstimate(nv, "exact", numerator=numerator,
                               denominator=denominator)


# --- structural classifiers -------------------------------------------------

@dataclass(frozen=True)
class StructuralProfile:
    n: int
    gamma: int
    omega: int
    gamma_small: bool                    # gamma(n) <= 2^-omega sqrt(n)
    gamma_log4: bool                     # gamma(n) < n / log^4 n
    has_huge_prime: bool                 # P+(n) > n^0.7
    two_medium_squarefree_primes: bool   # two p | n, p > 0.1 log n, p^2 !| n
    medium_prime_count_logC: int         # #{p | n : p > log^C n}


def structural_profile(n: FactoredInteger, C: float = 7.0) -> StructuralProfile:
    if n.value < 6:
        raise ValueError("n must be >= 6")
    nv = n.value
    g = prod(n.primes)
    omega = len(n.factors)
    ln = log(nv)
    medium = [p for p, e in n.factors if p > 0.1 * ln and e == 1]
    return StructuralProfile(
        n=nv,
        gamma=g,
        omega=omega,
        gamma_small=(g << omega) ** 2 <= nv,
        gamma_log4=g < nv / ln ** 4,
        has_huge_prime=n.factors[-1][0] ** 10 > nv ** 7,
        two_medium_squarefree_primes=len(medium) >= 2,
        medium_prime_count_logC=sum(1 for p in n.primes if p > ln ** C),
    )


@dataclass(frozen=True)
class TrichotomyResult:
    applicable: bool
    case1: bool = False   # a_{p1} uniquely determined by a_d, a_{p2}
    case2: bool = False   # e(p2 - a_{p2} + 1) < 4 sqrt(p1) (p2/p1)^{1/6}
    case3: bool = False   # t = (e(...), n+1) divides a_d a_{p2}, t > p2^{1/3}
    violation: bool = False


def trichotomy_check(n: FactoredInteger, p1: int, p2: int,
                     curve: CurveModN) -> TrichotomyResult:
    """For an E-Carmichael n with squarefree prime divisors p1 < p2, exactly
    verify that at least one of the three structural cases holds."""
    from .carmichael import is_carmichael_criterion
    if not (p1 < p2 and n.nu(p1) == 1 and n.nu(p2) == 1):
        raise ValueError("need primes p1 < p2 with p_i || n")
    if not is_carmichael_criterion(n, curve).verdict:
        return TrichotomyResult(applicable=False)
    td = trace_data(curve)
    a_p1, a_p2 = td.prime_traces[p1], td.prime_traces[p2]
    a_d = prod(td.prime_power_traces[(p, e)] for p, e in n.factors
               if p not in (p1, p2))
    E2 = e_function(p2 - a_p2 + 1)
    t = gcd(E2, n.value + 1)
    q = E2 // t
    # a_{p1} fixed mod q; unique iff one residue survives the Hasse interval
    bound = isqrt(4 * p1)
    case1 = sum(1 for s in range(-bound, bound + 1)
                if (s - a_p1) % q == 0) == 1
    # case 2/3 bounds follow from e = q*t with q <= 4*sqrt(p1) when case 1
    # fails and t <= p2^(1/3) when case 3 fails
    case2 = E2 ** 6 <= 4096 * p1 ** 3 * p2 ** 2
    case3 = (a_d * a_p1 * a_p2) % t == 0 and t ** 3 > p2
    return TrichotomyResult(True, case1, case2, case3,
                            violation=not (case1 or case2 or case3))


# --- experiments ------------------------------------------------------------

def eligible_range(n_min: int, n_max: int):
    """Non-prime-power n with gcd(n, 6) = 1 in [n_min, n_max]."""
    out = []
    for v in range(max(2, n_min), n_max + 1):
        if gcd(v, 6) != 1:
            continue
        f = factorize(v)
        if len(f.factors) >= 2:
            out.append(f)
    return out


def decay_sweep(n_min: int, n_max: int, samples_per_n: int, seed: int,
                filter_flag: str = None, workers: int = 1) -> dict:
    """Per-n Monte-Carlo estimates over the eligible range, plus the fitted
    constant max_n (upper 95% bound) * log n."""
    rows = []
    fitted = 0.0
    argmax = None
    for f in eligible_range(n_min, n_max):
        if filter_flag is not None:
            if not getattr(structural_profile(f), filter_flag):
                continue
        est = estimate_probability(f, samples_per_n, substream_seed(seed, f.value),
                                   workers=workers)
        c = est.upper * log(f.value)
        if c > fitted:
            fitted, argmax = c, f.value
        rows.append({"n": f.value, "successes": est.successes,
                     "samples": est.samples, "lower": est.lower,
                     "upper": est.upper})
    return {"rows": rows, "fitted_C": fitted, "argmax_n": argmax,
            "seed": seed, "samples_per_n": samples_per_n, "workers": workers,
            "filter": filter_flag}


def joint_sweep(x: int, samples_n: int, samples_e: int, seed: int,
                workers: int = 1) -> dict:
    """Two-level experiment: random n in [x, 2x], random curves per n.
    Primes and prime powers drawn count as non-Carmichael."""
    successes = 0
    skipped = 0
    for w in range(workers):
        share = samples_n // workers + (1 if w < samples_n % workers else 0)
        rng = random.Random(substream_seed(seed, w))
        for _ in range(share):
            v = rng.randrange(x, 2 * x + 1)
            f = factorize(v)
            if len(f.factors) < 2:
                skipped += 1
                continue
            successes += int(_sampled_mask(
                f, samples_e, rng.getrandbits(63)).sum())
    total = samples_n * samples_e
    lo, hi = wilson_interval(successes, total)
    return {"x": x, "samples_n": samples_n, "samples_e": samples_e,
            "successes": successes, "samples": total, "lower": lo,
            "upper": hi, "skipped_prime_or_prime_power": skipped,
            "comparison_upper_times_x_eighth": hi * x ** 0.125,
            "seed": seed, "workers": workers}
