"""Command-line benchmark front end.

Subcommands: estimate, additive, threshold, sweep, lowerbound, baseline.
Trial results are written one JSON record per line; sweeps are written as
CSV.  Exit codes: 0 success, 2 invalid input, 3 a requested check failed.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .dists import DensityMatrix, Distribution, ValidationError
from .bench import (
    classical_baseline,
    high_entropy_distribution,
    lower_bound_demo,
    query_scaling_sweep,
    random_distribution,
)
from .estimator import (
    EstimatorParams,
    estimate_additive,
    estimate_entropy,
    entropy_threshold_test,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CHECK_FAILED = 3

MODE_MAP = {
    "ideal": ("exact", "ideal_svd"),
    "bound": ("bound_only", "ideal_svd"),
    "sampled": ("sampled", "ideal_svd"),
    "statevector": ("exact", "statevector_qpe"),
}


def load_config(path: str) -> dict:
    """Flat key=value configuration file; values parsed as JSON when possible."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            try:
                out[key.strip()] = json.loads(val.strip())
            except json.JSONDecodeError:
                out[key.strip()] = val.strip()
    return out


def parse_gen(spec: str, seed: int = 0):
    """Generator spec 'name:key=val,...' -> Distribution.

    Names: uniform, point, zipf, dirichlet, highent.
    """
    name, _, rest = spec.partition(":")
    kw = {}
    if rest:
        for part in rest.split(","):
            k, _, v = part.partition("=")
            kw[k.strip()] = float(v) if "." in v or "e" in v.lower() else int(v)
    n = int(kw.get("n", 64))
    if name == "uniform":
        return Distribution.uniform(n)
    if name == "point":
        return Distribution.point_mass(n, int(kw.get("i", 0)))
    if name == "zipf":
        return Distribution.zipf(n, float(kw.get("s", 1.0)))
    if name == "dirichlet":
        return random_distribution(n, int(kw.get("seed", seed)))
    if name == "highent":
        return high_entropy_distribution(n, float(kw.get("target", 0.9 * math.log2(n))),
                                         int(kw.get("seed", seed)))
    raise ValidationError(f"unknown generator {name!r}")


def load_input(path: str):
    with open(path) as fh:
        rec = json.load(fh)
    if "probs" in rec:
        return Distribution.from_record(rec)
    if "re" in rec:
        return DensityMatrix.from_record(rec)
    raise ValidationError("input file is neither a distribution nor a density matrix")


def _resolve_source(args, seed: int):
    if getattr(args, "input", None):
        return load_input(args.input)
    if getattr(args, "gen", None):
        return parse_gen(args.gen, seed)
    raise ValidationError("provide --input or --gen")


def _emit(records, out_path):
    text = "\n".join(json.dumps(r, sort_keys=True) for r in records) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            flag = "--" + name.replace("_", "-")
            raise ValidationError(f"{flag} is required (flag or config file)")


def _seeds(args):
    return list(range(args.seeds)) if args.trials is None else \
        [args.seeds + t for t in range(args.trials)]


def cmd_estimate(args) -> int:
    _require(args, "gamma")
    mode, sve_mode = MODE_MAP[args.mode]
    records, ok = [], True
    for seed in _seeds(args):
        src = _resolve_source(args, seed)
        params = EstimatorParams(n=src.n, gamma=args.gamma, eps=args.eps,
                                 eta=args.eta)
        rep = estimate_entropy(src, params, mode=mode, seed=seed,
                               repetitions=args.repetitions, sve_mode=sve_mode)
        records.append(rep.to_record())
        ok = ok and rep.within_guarantee
    _emit(records, args.out)
    return EXIT_OK if (ok or not args.check) else EXIT_CHECK_FAILED


def cmd_additive(args) -> int:
    _require(args, "eps_add")
    mode, _ = MODE_MAP[args.mode]
    records, ok = [], True
    for seed in _seeds(args):
        src = _resolve_source(args, seed)
        rep = estimate_additive(src, args.eps_add, mode=mode, seed=seed,
                                repetitions=args.repetitions)
        rec = rep.to_record()
        rec["eps_add"] = args.eps_add
        rec["additive_error"] = abs(rep.h_tilde - rep.h_true)
        records.append(rec)
        ok = ok and rec["additive_error"] <= args.eps_add
    _emit(records, args.out)
    return EXIT_OK if (ok or not args.check) else EXIT_CHECK_FAILED


def cmd_threshold(args) -> int:
    _require(args, "high", "low")
    mode, _ = MODE_MAP[args.mode]
    records = []
    for seed in _seeds(args):
        src = _resolve_source(args, seed)
        rep = entropy_threshold_test(src, args.high, args.low, eps=args.eps,
                                     mode=mode, seed=seed,
                                     repetitions=args.repetitions)
        records.append({
            "high": rep.high, "h_tilde": rep.h_tilde, "gamma": rep.gamma,
            "cut": rep.cut, "seed": seed, "n": rep.estimate.n,
        })
    _emit(records, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    _require(args, "gamma", "n_list")
    ns = [int(x) for x in args.n_list.split(",")]
    res = query_scaling_sweep(ns, args.gamma, args.eps, quantum=args.quantum,
                              exclude_smallest=args.exclude_smallest)
    text = res.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if (res.passed or not args.check) else EXIT_CHECK_FAILED


def cmd_lowerbound(args) -> int:
    demo = lower_bound_demo(args.kind, args.n, args.param)
    rec = {"kind": demo.kind, "n": demo.n, "param": demo.param,
           "passed": demo.passed, **demo.report}
    if demo.chain:
        rec["chain"] = demo.chain
    _emit([rec], args.out)
    return EXIT_OK if (demo.passed or not args.check) else EXIT_CHECK_FAILED


def cmd_baseline(args) -> int:
    _require(args, "gamma")
    records = []
    for seed in _seeds(args):
        src = _resolve_source(args, seed)
        if not isinstance(src, Distribution):
            raise ValidationError("baseline runs on distributions only")
        rep = classical_baseline(src, args.gamma, eta=args.eta_sample, seed=seed)
        records.append(rep.to_record())
    _emit(records, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qentropy-bench",
                                 description="entropy-estimation benchmarks")
    ap.add_argument("--config", help="flat key=value config file applied as defaults")
    sub = ap.add_subparsers(dest="task", required=True)

    def common(p, modes=True):
        p.add_argument("--config", help="flat key=value config file applied as defaults")
        p.add_argument("--input", help="JSON distribution or density matrix")
        p.add_argument("--gen", help="generator spec, e.g. dirichlet:n=64,seed=3")
        p.add_argument("--seeds", type=int, default=1,
                       help="number of seeds (0..k-1), or base seed with --trials")
        p.add_argument("--trials", type=int, default=None,
                       help="run this many trials at seeds base..base+t-1")
        p.add_argument("--repetitions", type=int, default=1,
                       help="odd median-boosting count")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--check", action="store_true",
                       help="exit 3 if a guarantee/check fails")
        if modes:
            p.add_argument("--mode", choices=sorted(MODE_MAP), default="ideal")

    p = sub.add_parser("estimate", help="multiplicative entropy estimate")
    common(p)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--eta", type=float, default=None)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("additive", help="additive-error estimate")
    common(p)
    p.add_argument("--eps-add", dest="eps_add", type=float, default=None)
    p.set_defaults(func=cmd_additive)

    p = sub.add_parser("threshold", help="entropy threshold test")
    common(p)
    p.add_argument("--high", type=float, default=None)
    p.add_argument("--low", type=float, default=None)
    p.add_argument("--eps", type=float, default=0.1)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("sweep", help="query-scaling sweep (analytic ledgers)")
    p.add_argument("--config", help="flat key=value config file applied as defaults")
    p.add_argument("--n-list", dest="n_list", default=None,
                   help="comma-separated sizes, e.g. 64,128,...,16384")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--quantum", action="store_true",
                   help="quantum diagonal inputs (alpha = sqrt(n))")
    p.add_argument("--exclude-smallest", type=int, default=2)
    p.add_argument("--out")
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("lowerbound", help="hard-instance separation demo")
    p.add_argument("--config", help="flat key=value config file applied as defaults")
    p.add_argument("--kind", required=True,
                   choices=["near_deterministic", "two_point_vs_spread", "collision"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--param", type=float, required=True,
                   help="eps for the first two kinds, gamma for collision")
    p.add_argument("--out")
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_lowerbound)

    p = sub.add_parser("baseline", help="classical sampling baseline")
    common(p, modes=False)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--eta-sample", dest="eta_sample", type=float, default=0.0,
                   help="sampling exponent boost in s = n^((1+eta)/gamma^2)")
    p.set_defaults(func=cmd_baseline)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        defaults = load_config(args.config)
        given = {tok.lstrip("-").replace("-", "_")
                 for tok in (argv if argv is not None else sys.argv[1:])
                 if tok.startswith("--")}
        for key, val in defaults.items():
            attr = key.replace("-", "_")
            if hasattr(args, attr) and attr not in given:
                setattr(args, attr, val)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
