"""Hurwitz/Kronecker class numbers, the psi factor and L-value estimator,
and the Deuring census cross-check."""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .arith import FactoredInteger, is_prime, kronecker_symbol


def hurwitz_class_number(D: int) -> Fraction:
    """H(D): weighted number of classes of positive-definite binary quadratic
    forms ax^2 + bxy + cy^2 (imprimitive included) of discriminant -D.

    Reduced forms satisfy |b| <= a <= c with b >= 0 whenever |b| = a or
    a = c; the classes of a(x^2 + y^2) and a(x^2 + xy + y^2) carry weights
    1/2 and 1/3.
    """
    if D < 3:
        raise ValueError("D must be >= 3")
    if (-D) % 4 not in (0, 1):
        raise ValueError("-D must be congruent to 0 or 1 mod 4")
    total = Fraction(0)
    a = 1
    while 3 * a * a <= D:
        for b in range(-a, a + 1):
            if (b * b + D) % (4 * a):
                continue
            c = (b * b + D) // (4 * a)
            if c < a:
                continue
            if b < 0 and (c == a or -b == a):
                continue  # boundary classes counted once, with b >= 0
            if a == b == c:
                total += Fraction(1, 3)   # multiples of x^2 + xy + y^2
            elif b == 0 and a == c:
                total += Fraction(1, 2)   # multiples of x^2 + y^2
            else:
                total += 1
        a += 1
    return total


def psi_factor(f: FactoredInteger, n_prime: int) -> Fraction:
    """The multiplicative correction factor psi(f) attached to a squarefree
    n' with gcd(n', f) = 1: psi(p^k) is (p - p^-k)/(p-1), 1, or
    (p + 1 - 2p^-k)/(p-1) as (p/n') = 0, 1, -1."""
    for p, _ in f.factors:
        if n_prime % p == 0:
            raise ValueError("n_prime and f must be coprime")
    value = Fraction(1)
    for p, k in f.factors:
        chi = kronecker_symbol(p, n_prime)
        pk = Fraction(1, p ** k)
        if chi == 0:
            value *= Fraction(p - pk, p - 1)
        elif chi == 1:
            pass
        else:
            value *= Fraction(p + 1 - 2 * pk, p - 1)
    return value


def L_estimate(n_prime: int, terms: int = 10 ** 6) -> float:
    """Partial sum of L(1, (./n')): sum_{m<=terms} (m/n')/m.  A diagnostic
    estimator only; no error bound is claimed."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    total = 0.0
    for m in range(1, terms + 1):
        chi = kronecker_symbol(m, n_prime)
        if chi:
            total += chi / m
    return total


def singular_pairs(p: int) -> int:
    """Number of (A, B) mod p with vanishing short-form discriminant."""
    return sum(1 for A in range(p) for B in range(p)
               if (4 * A ** 3 + 27 * B * B) % p == 0)


def deuring_census(p: int) -> dict:
    """Histogram a -> #{(A,B) mod p : good reduction, trace = a}, exhaustive
    over the full coefficient space."""
    if p in (2, 3):
        raise ValueError("short-form census unsupported for p in {2, 3}")
    if not is_prime(p):
        raise ValueError("p must be prime")
    from .bulk import trace_table
    tt = trace_table(p)
    counts = {}
    for a in range(-isqrt(4 * p), isqrt(4 * p) + 1):
        c = int(np.count_nonzero(tt == a))
        if c:
            counts[a] = c
    return counts


@dataclass(frozen=True)
class DeuringReport:
    p: int
    per_trace: dict        # a -> (predicted, actual)
    total_predicted: int
    total_actual: int
    mismatches: list

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.total_predicted == self.total_actual


def deuring_check(p: int) -> DeuringReport:
    """Compare census counts with (p-1)/2 * H(4p - a^2) for every admissible
    trace, plus the mass identity against the good-pair total."""
    census = deuring_census(p)
    per_trace = {}
    mismatches = []
    total_pred = Fraction(0)
    for a in range(-isqrt(4 * p), isqrt(4 * p) + 1):
        D = 4 * p - a * a
        if D <= 0:
            continue
        predicted = Fraction(p - 1, 2) * hurwitz_class_number(D)
        actual = census.get(a, 0)
        per_trace[a] = (predicted, actual)
        total_pred += predicted
        if predicted != actual:
            mismatches.append((a, predicted, actual))
    total_actual = sum(census.values())
    return DeuringReport(p, per_trace, total_pred, total_actual, mismatches)
