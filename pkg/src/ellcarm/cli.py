"""Command-line front end: orchestration, configuration, serialization."""

import argparse
import json
import os
import sys
from dataclasses import asdict, is_dataclass
from fractions import Fraction

import numpy as np

from . import __version__, carmichael, census, classnum, intervals
from .arith import factorize
from .curves import (WeierstrassCurve, assemble_mod_n, curve_from_json,
                     curve_mod_n_from_pair)

_SAFE_INT = 2 ** 53


def _jsonable(obj):
    """Make a report JSON-serializable; integers beyond 2^53 become decimal
    strings for cross-language portability."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return {"numerator": _jsonable(obj.numerator),
                "denominator": _jsonable(obj.denominator)}
    if isinstance(obj, (np.integer,)):
        obj = int(obj)
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < _SAFE_INT else str(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def parse_curve_spec(spec: str, n):
    """`A,B` (single short-form pair mod n) or a `p^k:[...]` component list
    separated by `;`."""
    spec = spec.strip()
    if ":" not in spec:
        A, B = (int(t) for t in spec.split(","))
        return curve_mod_n_from_pair(n, A, B)
    comps = []
    for part in spec.split(";"):
        head, body = part.split(":")
        head = head.strip()
        if "^" in head:
            p, e = (int(t) for t in head.split("^"))
        else:
            p, e = int(head), 1
        coeffs = tuple(int(t) for t in body.strip().strip("[]").split(","))
        comps.append((p, e, WeierstrassCurve(p ** e, coeffs)))
    return assemble_mod_n(comps)


def _emit(args, report: dict, extra_csv=None) -> None:
    payload = {
        "version": __version__,
        "config": {k: v for k, v in vars(args).items()
                   if k not in ("func",) and v is not None},
        "seed": getattr(args, "seed", None),
        "workers": getattr(args, "workers", None),
        "report": report,
    }
    fmt = getattr(args, "format", "json")
    if fmt == "csv" and extra_csv is not None:
        header, rows = extra_csv
        print(",".join(header))
        for row in rows:
            print(",".join(str(c) for c in row))
    elif fmt == "text":
        print(json.dumps(_jsonable(payload), indent=2))
    else:
        print(json.dumps(_jsonable(payload)))


def _cmd_witness(args):
    n = factorize(args.n)
    curve, verdict = carmichael.witness(n)
    _emit(args, verdict.to_json())


def _cmd_test(args):
    n = factorize(args.n)
    curve = parse_curve_spec(args.curve, n)
    verdict = carmichael.is_carmichael_criterion(n, curve)
    _emit(args, verdict.to_json())


def _cmd_test_def(args):
    n = factorize(args.n)
    curve = parse_curve_spec(args.curve, n)
    verdict = carmichael.is_carmichael_definition(
        n, curve, sample_points=args.samples, seed=args.seed)
    _emit(args, verdict.to_json())


def _cmd_verify(args):
    with open(args.certificate) as fh:
        data = json.load(fh)
    ok = carmichael.verify_certificate(data)
    _emit(args, {"valid": ok})
    return 0 if ok else 1


def _cmd_exact(args):
    est = census.exact_probability(factorize(args.n),
                                   bound=args.exhaustive_bound)
    _emit(args, est)


def _cmd_estimate(args):
    est = census.estimate_probability(factorize(args.n), args.samples,
                                      args.seed, workers=args.workers)
    _emit(args, est)


def _cmd_sweep(args):
    rep = census.decay_sweep(args.min, args.max, args.samples, args.seed,
                             filter_flag=args.filter, workers=args.workers)
    rows = [(r["n"], r["samples"], r["successes"], r["lower"], r["upper"])
            for r in rep["rows"]]
    _emit(args, rep, extra_csv=(("n", "samples", "successes", "lower",
                                 "upper"), rows))


def _cmd_joint(args):
    rep = census.joint_sweep(args.x, args.samples_n, args.samples_e,
                             args.seed, workers=args.workers)
    _emit(args, rep)


def _cmd_deuring(args):
    rep = classnum.deuring_check(args.p)
    rows = [(a, float(pred), act) for a, (pred, act)
            in sorted(rep.per_trace.items())]
    _emit(args, rep, extra_csv=(("a", "predicted", "actual"), rows))


def _cmd_classnum(args):
    _emit(args, {"D": args.D,
                 "H": classnum.hurwitz_class_number(args.D)})


def _cmd_profile(args):
    _emit(args, census.structural_profile(factorize(args.n), C=args.C))


def _cmd_lemma(args):
    which = args.which
    if which == "abc":
        rep = intervals.count_e_small(args.x, args.k, args.constant)
    elif which == "shortint":
        primes = [int(t) for t in args.primes.split(",")] if args.primes else []
        rep = intervals.count_smooth_factor_interval(args.x, primes,
                                                     args.constant)
    elif which == "nonsmooth":
        rep = intervals.count_large_prime_factor(args.x, args.c,
                                                 args.constant)
    elif which == "vaughan":
        rep = {"n": args.n, "U": args.U, "V": args.V,
               "holds": intervals.vaughan_identity_check(args.n, args.U,
                                                         args.V)}
    elif which == "baker":
        rep = {"p": args.p, "cutoff": intervals.baker_cutoff(args.p)}
    else:  # lucas-ones
        sols = intervals.lucas_ones(args.p, args.a, args.k_max)
        rep = {"p": args.p, "a": args.a, "K": args.k_max,
               "solutions": sorted(sols),
               "baker_cutoff": intervals.baker_cutoff(args.p)}
    _emit(args, rep)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"),
                        default="json")
    ap = argparse.ArgumentParser(
        prog="ellcarm",
        description="Elliptic Carmichael tests, witness curves, and "
                    "desk-scale counting experiments")
    default_workers = int(os.environ.get("ELLCARM_WORKERS", "1"))
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.set_defaults(func=fn)
        return p

    p = add("witness", _cmd_witness)
    p.add_argument("n", type=int)

    p = add("test", _cmd_test)
    p.add_argument("n", type=int)
    p.add_argument("--curve", required=True)

    p = add("test-def", _cmd_test_def)
    p.add_argument("n", type=int)
    p.add_argument("--curve", required=True)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)

    p = add("verify", _cmd_verify)
    p.add_argument("certificate")

    p = add("exact", _cmd_exact)
    p.add_argument("n", type=int)
    p.add_argument("--exhaustive-bound", type=int, default=10 ** 4)

    p = add("estimate", _cmd_estimate)
    p.add_argument("n", type=int)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=default_workers)

    p = add("sweep", _cmd_sweep)
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--filter", default=None)
    p.add_argument("--workers", type=int, default=default_workers)

    p = add("joint", _cmd_joint)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--samples-n", type=int, required=True)
    p.add_argument("--samples-e", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=default_workers)

    p = add("deuring", _cmd_deuring)
    p.add_argument("p", type=int)

    p = add("classnum", _cmd_classnum)
    p.add_argument("D", type=int)

    p = add("profile", _cmd_profile)
    p.add_argument("n", type=int)
    p.add_argument("--C", type=float, default=7.0)

    p = add("lemma", _cmd_lemma)
    p.add_argument("which", choices=("abc", "shortint", "nonsmooth",
                                     "vaughan", "baker", "lucas-ones"))
    p.add_argument("--x", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--primes")
    p.add_argument("--c", type=float, default=0.05)
    p.add_argument("--n", type=int)
    p.add_argument("--U", type=int)
    p.add_argument("--V", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--k-max", type=int, default=200)
    p.add_argument("--constant", type=float, default=None)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        rc = args.func(args)
        return 0 if rc is None else rc
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": str(exc)}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
