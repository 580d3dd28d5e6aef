import json
import random

import pytest

from ellcarm.arith import factorize
from ellcarm.carmichael import (is_carmichael_criterion,
                                is_carmichael_definition, verify_certificate,
                                witness)
from ellcarm.curves import (assemble_mod_n, curve_mod_n_from_pair,
                            find_supersingular, find_trace_one, good_reduction,
                            long_curve, short_curve)


def test_positive_instance_n35():
    n = factorize(35)
    curve = curve_mod_n_from_pair(n, 10, 21)
    v1 = is_carmichael_criterion(n, curve)
    v2 = is_carmichael_definition(n, curve)
    assert v1.verdict is True and v2.verdict is True
    comps = {c["prime"]: c["exponent"]
             for c in v1.certificate["components"]}
    assert comps == {5: 6, 7: 4}  # both divide 35 - 0 + 1 = 36
    assert verify_certificate(v1)


def test_negative_instance_trace_one_at_3():
    # a_3 = 1 makes the component exponent 3; with a_5 = 0 we get a_15 = 0,
    # so the tested multiple is 16, which 3 does not divide
    n = factorize(15)
    c3 = find_trace_one(3)
    c5 = find_supersingular(5)
    curve = assemble_mod_n([(3, 1, c3), (5, 1, c5)])
    v = is_carmichael_criterion(n, curve)
    assert v.verdict is False
    assert v.certificate["kind"] == "divisibility-failure"
    assert v.certificate["prime"] == 3
    assert verify_certificate(v)


def test_trace_one_at_both_components_is_carmichael_for_15():
    # with a_3 = a_5 = 1 the multiple is 15 itself and both exponents
    # (3 and 5) divide it
    n = factorize(15)
    curve = assemble_mod_n([(3, 1, find_trace_one(3)),
                            (5, 1, find_trace_one(5))])
    assert is_carmichael_criterion(n, curve).verdict is True
    assert is_carmichael_definition(n, curve).verdict is True


def test_criterion_definition_agreement_exhaustive_n35():
    n = factorize(35)
    for A in range(35):
        for B in range(35):
            try:
                curve = curve_mod_n_from_pair(n, A, B)
            except ValueError:
                continue
            assert (is_carmichael_criterion(n, curve).verdict
                    == is_carmichael_definition(n, curve).verdict)


def test_definition_sampling_one_sided():
    n = factorize(35)
    curve = curve_mod_n_from_pair(n, 10, 21)
    v = is_carmichael_definition(n, curve, sample_points=30, seed=1)
    assert v.verdict is True
    assert v.mode == "definition-sampled"
    assert v.certificate["kind"] == "sampled-positive"
    neg, vneg = witness(n)
    assert vneg.verdict is False
    w = is_carmichael_definition(n, neg, sample_points=200, seed=1)
    assert w.verdict is False
    assert verify_certificate(w)


def test_witness_squarefree_and_square_cases():
    for nv in (35, 15, 91, 175, 245, 1001, 5 * 5 * 7, 7 * 11 * 13):
        n = factorize(nv)
        curve, v = witness(n)
        assert v.verdict is False
        assert all(good_reduction(c) for _, _, c in curve.components)
        assert verify_certificate(v)


def test_witness_square_prime_uses_supersingular_component():
    n = factorize(175)  # 5^2 * 7
    curve, v = witness(n)
    comp5 = curve.component(5)
    from ellcarm.curves import reduce_mod_prime, trace
    assert trace(reduce_mod_prime(comp5, 5)) == 0
    assert v.certificate["prime"] == 5


def test_witness_rejects_prime_powers():
    for nv in (7, 25, 343):
        with pytest.raises(ValueError):
            witness(factorize(nv))


def test_certificate_tamper_detection():
    n = factorize(35)
    curve, v = witness(n)
    good = v.to_json()
    assert verify_certificate(good)
    bad = json.loads(json.dumps(good))
    bad["certificate"]["remainder"] = 0
    assert not verify_certificate(bad)
    bad2 = json.loads(json.dumps(good))
    bad2["verdict"] = True
    assert not verify_certificate(bad2)
    bad3 = json.loads(json.dumps(good))
    del bad3["certificate"]["prime"]
    assert not verify_certificate(bad3)


def test_verify_checks_witness_points():
    n = factorize(35)
    curve, _ = witness(n)
    v = is_carmichael_definition(n, curve)
    assert v.verdict is False
    data = v.to_json()
    assert verify_certificate(data)
    data["certificate"]["point"] = [0, 1, 0]  # the identity always passes
    assert not verify_certificate(data)


def test_rejects_prime_and_prime_power_input():
    c = curve_mod_n_from_pair(factorize(35), 10, 21)
    with pytest.raises(ValueError):
        is_carmichael_criterion(factorize(49), c)
