"""End-to-end acceptance criteria.

Each test prints one PASS/FAIL line to the real terminal (bypassing pytest
capture) so the run transcript shows every criterion's outcome.
"""

import math
import random

import pytest

from ellcarm.arith import e_function, factorize, is_prime, primes_up_to
from ellcarm.carmichael import (is_carmichael_criterion,
                                is_carmichael_definition, verify_certificate,
                                witness)
from ellcarm.census import (decay_sweep, eligible_range, estimate_probability,
                            exact_probability, sample_curve, substream_seed,
                            trichotomy_check)
from ellcarm.classnum import deuring_check
from ellcarm.curves import (O, curve_mod_n_from_pair, enumerate_points,
                            good_reduction, scalar_mul, short_curve, trace,
                            trace_data, trace_prime_power)
from ellcarm.intervals import (baker_cutoff, count_e_small,
                               count_large_prime_factor,
                               count_smooth_factor_interval, lucas_ones,
                               vaughan_identity_check)
from ellcarm import bulk
from oracles import ext_field_count, group_exponent_oracle


def report(capsys, idx, label, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    with capsys.disabled():
        print(f"\nACCEPTANCE {idx:2d} [{tag}] {label}"
              + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {idx}: {label} {detail}"


# shared between criteria 2 and 12: positive (n, curve) pairs found in the
# criterion sweeps
_CARMICHAEL_PAIRS = []
_SWEPT = {"done": False}


def _definition_bulk(n, curve):
    """Direct definition check, vectorized per component: m*P = O for every
    enumerated point."""
    td = trace_data(curve)
    m = n.value - td.a_n + 1
    for p, e, comp in curve.components:
        if e == 1 and p >= 5:
            A, B = comp.coeffs
            if not bulk.annihilates(p, A, B, m):
                return False
        else:
            for P in enumerate_points(comp):
                if scalar_mul(comp, m, P) != O:
                    return False
    return True


def _run_agreement_sweeps():
    if _SWEPT["done"]:
        return
    disagreements = 0
    # exhaustive: every good (A, B) mod n for non-prime-power n <= 200,
    # gcd(n, 6) = 1
    for f in eligible_range(2, 200):
        nv = f.value
        for A in range(nv):
            for B in range(nv):
                try:
                    curve = curve_mod_n_from_pair(f, A, B)
                except ValueError:
                    continue
                v1 = is_carmichael_criterion(f, curve).verdict
                v2 = is_carmichael_definition(f, curve).verdict
                if v1 != v2:
                    disagreements += 1
                elif v1:
                    _CARMICHAEL_PAIRS.append((f, curve))
    # sampled: >= 10^3 curves for each of 100 random n <= 10^4
    rng = random.Random(20260826)
    pool = eligible_range(2, 10 ** 4)
    for f in rng.sample(pool, 100):
        crng = random.Random(substream_seed(20260826, f.value))
        for _ in range(1000):
            curve = sample_curve(f, crng)
            v1 = is_carmichael_criterion(f, curve).verdict
            v2 = _definition_bulk(f, curve)
            if v1 != v2:
                disagreements += 1
            elif v1:
                _CARMICHAEL_PAIRS.append((f, curve))
    _SWEPT["done"] = True
    _SWEPT["disagreements"] = disagreements


def test_01_witness_completeness(capsys):
    failures = checked = 0
    for nv in range(2, 10 ** 4 + 1):
        f = factorize(nv)
        if len(f.factors) < 2:
            continue
        checked += 1
        try:
            curve, v = witness(f)
            ok = (v.verdict is False
                  and all(good_reduction(c) for _, _, c in curve.components)
                  and verify_certificate(v))
        except Exception:
            ok = False
        failures += not ok
    report(capsys, 1, "witness + verify for every non-prime-power n <= 10^4",
           failures == 0, f"{checked} n, {failures} failures")


def test_02_criterion_definition_agreement(capsys):
    _run_agreement_sweeps()
    report(capsys, 2, "criterion = definition (exhaustive n<=200 + sampled)",
           _SWEPT["disagreements"] == 0,
           f"{_SWEPT['disagreements']} disagreements, "
           f"{len(_CARMICHAEL_PAIRS)} positive pairs collected")


def test_03_deuring_class_number(capsys):
    ok = True
    for p in primes_up_to(199):
        if p < 5:
            continue
        rep = deuring_check(p)
        ok &= rep.ok and not rep.mismatches
        if p == 5:
            actual = {a: pair[1] for a, pair in rep.per_trace.items()}
            ok &= actual == {0: 4, 1: 2, -1: 2, 2: 3, -2: 3, 3: 2, -3: 2,
                             4: 1, -4: 1}
            ok &= rep.total_actual == 20
    report(capsys, 3, "trace census matches (p-1)/2 * H(4p - a^2), "
           "5 <= p <= 199", ok)


def test_04_lucas_extension_field(capsys):
    mismatches = 0
    for p in (5, 7):
        for A in range(p):
            for B in range(p):
                curve = short_curve(p, A, B)
                if not good_reduction(curve):
                    continue
                a_p = trace(curve)
                for k in (2, 3):
                    got = trace_prime_power(a_p, p, k)
                    want = p ** k + 1 - ext_field_count(p, k, A, B)
                    mismatches += got != want
    report(capsys, 4, "prime-power traces match extension-field counts, "
           "p in {5,7}, k in {2,3}", mismatches == 0)


def test_05_exponent_lifting(capsys):
    mismatches = 0
    rng = random.Random(11)
    for p in (5, 7, 11, 13):
        done = 0
        while done < 20:
            A, B = rng.randrange(p), rng.randrange(p)
            if not good_reduction(short_curve(p, A, B)):
                continue
            done += 1
            base_exp = None
            for k in (2, 3):
                lifted = short_curve(p ** k, A, B)
                from ellcarm.curves import exponent_mod_prime_power
                got = exponent_mod_prime_power(lifted, p, k)
                want = group_exponent_oracle(lifted, rng)
                mismatches += got != want
    report(capsys, 5, "lifted group exponents match the enumeration oracle "
           "(incl. anomalous splits)", mismatches == 0)


def test_06_e_kernel_divisibility(capsys):
    failures = 0
    for n2 in range(1, 501):
        for n1 in range(1, n2 + 1):
            if n2 % n1 == 0 and n2 % e_function(n1 * n2) != 0:
                failures += 1
    report(capsys, 6, "e(n1*n2) divides n2 for all n1 | n2 <= 500",
           failures == 0)


def test_07_positive_instance(capsys):
    f = factorize(35)
    curve = curve_mod_n_from_pair(f, 10, 21)
    v1 = is_carmichael_criterion(f, curve)
    v2 = is_carmichael_definition(f, curve)
    exps = {c["prime"]: c["exponent"] for c in v1.certificate["components"]}
    est = exact_probability(f)
    ok = (v1.verdict is True and v2.verdict is True
          and exps == {5: 6, 7: 4} and est.numerator >= 1)
    report(capsys, 7, "n=35, y^2=x^3+10x+21 positive by both tests; "
           "exact numerator >= 1", ok,
           f"exact {est.numerator}/{est.denominator}")


def test_08_decay_experiment(capsys):
    rep = decay_sweep(10 ** 3, 10 ** 4, 10 ** 3, seed=20260826)
    fitted = rep["fitted_C"]
    ok = math.isfinite(fitted) and fitted > 0
    # exact cross-check: within the sweep range the exact value times log n
    # stays under the fitted constant; below it (where the asymptotic regime
    # has not set in) the running max must stay within a factor 4
    worst_in_range = worst_small = 0.0
    for f in eligible_range(2, 2000):
        est = exact_probability(f)
        v = est.numerator / est.denominator * math.log(f.value)
        if f.value >= 10 ** 3:
            worst_in_range = max(worst_in_range, v)
        else:
            worst_small = max(worst_small, v)
    ok &= worst_in_range <= fitted
    ok &= worst_small <= 4 * fitted
    report(capsys, 8, "decay constant finite; exact values bounded by it",
           ok, f"fitted C={fitted:.3f}, exact max in range "
           f"{worst_in_range:.3f}, below range {worst_small:.3f}")


def test_09_counting_lemmas(capsys):
    xs = (10 ** 4, 10 ** 5, 10 ** 6)
    ok = True
    details = []
    for make in (lambda x: count_e_small(x, 10),
                 lambda x: count_smooth_factor_interval(x, [2, 3, 5]),
                 lambda x: count_large_prime_factor(x, 0.05)):
        fits = [make(x).fitted_constant for x in xs]
        nz = [f for f in fits if f > 0]
        ok &= bool(nz) and max(nz) <= 4 * min(nz)
        details.append(f"{max(nz) / min(nz):.2f}x")
    # explicit-constant regime: |P| = 1 < log x / (4 log log x), count <= 24|P|
    for x in (10 ** 5, 10 ** 6):
        assert 1 < math.log(x) / (4 * math.log(math.log(x)))
        ok &= count_smooth_factor_interval(x, [2]).count <= 24
    # lower-bound regime at x = 10^6
    rep = count_large_prime_factor(10 ** 6, 0.05, constant=1.0)
    ok &= rep.count >= 0.05 * math.sqrt(10 ** 6) and rep.passed
    report(capsys, 9, "interval counts track their bounds (stability "
           "within 4x; explicit constant 24; lower bound c*sqrt(x))",
           ok, "spreads " + ", ".join(details))


def test_10_vaughan_identity(capsys):
    ok = all(vaughan_identity_check(n, U, V)
             for n in range(2, 201)
             for U in range(1, min(6, n))
             for V in range(1, 6))
    report(capsys, 10, "von Mangoldt decomposition exact for n <= 200, "
           "U,V <= 5", ok)


def test_11_baker_consistency(capsys):
    ok = lucas_ones(2, -1, 200) == {4}
    for p in primes_up_to(100):
        cutoff = baker_cutoff(p)
        bound = math.isqrt(4 * p)
        for a in range(-bound, bound + 1):
            ok &= all(k <= cutoff for k in lucas_ones(p, a, 200))
    report(capsys, 11, "Lucas V_k = 1 solutions below the linear-forms "
           "cutoff; anchor (2,-1) -> {4}", ok)


def test_12_trichotomy(capsys):
    _run_agreement_sweeps()
    violations = applicable = 0
    for f, curve in _CARMICHAEL_PAIRS:
        sqfree = [p for p, e in f.factors if e == 1]
        if len(sqfree) < 2:
            continue
        res = trichotomy_check(f, sqfree[0], sqfree[1], curve)
        applicable += res.applicable
        violations += bool(res.applicable and res.violation)
    report(capsys, 12, "structural trichotomy holds for every positive pair",
           violations == 0 and applicable > 0,
           f"{applicable} applicable pairs, {violations} violations")
