"""Command-line entry point: ``optimal-pac {subsamples,train,bounds,experiment,selftest}``."""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import bounds, kernels
from .experiment import (
    ExperimentConfig,
    emit_csv,
    emit_summary_csv,
    estimate_sample_complexity,
    run_sweep,
    train,
)
from .learners import (
    DEFAULT_TARGETS,
    ConceptClass,
    TargetSpec,
    exact_error,
    hypothesis_from_params,
    mc_error,
)
from .selftest import SUITES, run_selftest
from .subsample import build_subsamples, enumerate_direct


def _cmd_subsamples(args) -> int:
    if args.ell is not None:
        fam = enumerate_direct(args.ell)
    else:
        fam = build_subsamples(range(args.m))
    subs = [list(s) for s in fam]
    if args.format == "json":
        print(json.dumps(subs))
    else:
        for s in subs:
            print(" ".join(map(str, s)))
    return 0


def _parse_params(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


def _cmd_train(args) -> int:
    concept = ConceptClass(args.concept)
    target = (hypothesis_from_params(concept, _parse_params(args.target_params))
              if args.target_params else DEFAULT_TARGETS[concept])
    spec = TargetSpec(concept, target)
    X, y = spec.sample(args.m, np.random.default_rng(args.seed))
    K = args.k if args.k is not None else 1
    ensemble = train(args.algo, spec, (X, y), K)
    if concept.input_dim == 1:
        err, how = exact_error(ensemble, spec), "exact"
    else:
        err, how = mc_error(ensemble, spec, args.mc_points, args.seed), f"mc n={args.mc_points}"
    print(f"class={concept.value} algo={args.algo} m={args.m} seed={args.seed} target={target}")
    print(f"ensemble size: {len(ensemble)}")
    print(f"error ({how}): {err:.6g}")
    if args.verbose:
        for i, h in enumerate(ensemble.members):
            print(f"  [{i}] {h}")
    return 0


def _cmd_bounds(args) -> int:
    eps, delta, d = args.eps, args.delta, args.d
    row = bounds.compare(eps, delta, d, args.k, args.c0)
    if args.csv:
        w = csv.writer(sys.stdout, lineterminator="\n")
        cols = ["eps", "delta", "d", "lower", "classic", "hlw", "simon", "simonK", "hanneke"]
        w.writerow(cols)
        w.writerow([row[c] for c in cols])
        return 0
    if args.compare:
        valid = "" if bounds.lower_bound_is_valid(eps, delta) else "  (outside its stated parameter range)"
        print(f"eps={eps} delta={delta} d={d} c0={args.c0}")
        print(f"{'lower bound':28s} {row['lower']:>16.6g}{valid}")
        print(f"{'classic (VC bound inversion)':28s} {row['classic']:>16d}")
        print(f"{'one-inclusion (shape-only)':28s} {row['hlw']:>16.6g}")
        print(f"{'simon K=' + str(row['simonK']) + ' (shape-only)':28s} {row['simon']:>16.6g}")
        print(f"{'recursive majority (c=1800)':28s} {row['hanneke']:>16d}")
    else:
        print(f"hanneke_sample_bound = {row['hanneke']}")
        print(f"lower_bound = {row['lower']:.6g}")
    if args.m is not None:
        print(f"{'vc_consistency_bound(m)':28s} {bounds.vc_consistency_bound(args.m, delta, d):>16.6g}")
        print(f"{'theorem_error_bound(m)':28s} {bounds.theorem_error_bound(args.m, delta, d):>16.6g}")
    return 0


def _cmd_experiment(args) -> int:
    config = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    records, summary = run_sweep(config, jobs=args.jobs)
    if args.out:
        if args.summary_only:
            emit_summary_csv(summary, args.out)
        else:
            emit_csv(records, args.out, timing=args.timing)
    print(f"{'algo':8s} {'m':>6s} {'median':>11s} {'q(1-delta)':>11s} {'success':>8s} {'thm bound':>10s}")
    for c in summary.cells:
        print(f"{c.algo:8s} {c.m:6d} {c.median:11.4g} {c.quantile:11.4g} {c.success:8.3f} "
              f"{c.theorem_bound:10.4g}")
    est = estimate_sample_complexity(config, summary)
    for algo, m in est["estimates"].items():
        print(f"empirical sample complexity {algo}: {m if m is not None else 'not reached on grid'}")
    if est["hanneke_bound"] is not None:
        print(f"reference: lower bound {est['lower_bound']:.6g}, recursive-majority bound {est['hanneke_bound']}")
    return 0


def _cmd_selftest(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    results = run_selftest(suites)
    return 0 if all(r.passed for r in results.values()) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="optimal-pac", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s (kernels: {kernels.BACKEND})")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("subsamples", help="print the recursive subsample family")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--m", type=int, help="sample size (recursive construction)")
    g.add_argument("--ell", type=int, help="level; 4**ell points via the closed-form rule")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=_cmd_subsamples)

    t = sub.add_parser("train", help="train one learner on a synthetic sample")
    t.add_argument("--class", dest="concept", choices=[c.value for c in ConceptClass], required=True)
    t.add_argument("--algo", choices=("hanneke", "simon", "erm"), default="hanneke")
    t.add_argument("--m", type=int, required=True)
    t.add_argument("--k", type=int, default=None, help="number of nested blocks (simon only, default 1)")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--target-params", default=None, help="comma-separated target parameters")
    t.add_argument("--mc-points", type=int, default=100_000)
    t.add_argument("--verbose", "-v", action="store_true")
    t.set_defaults(func=_cmd_train)

    b = sub.add_parser("bounds", help="evaluate sample-complexity bounds")
    b.add_argument("--eps", type=float, required=True)
    b.add_argument("--delta", type=float, required=True)
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--k", type=int, default=None, help="number of nested blocks (default: optimizing choice)")
    b.add_argument("--c0", type=float, default=1.0, help="constant for shape-only bounds")
    b.add_argument("--m", type=int, default=None, help="also print error bounds at this m")
    fmt = b.add_mutually_exclusive_group()
    fmt.add_argument("--compare", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    b.set_defaults(func=_cmd_bounds)

    e = sub.add_parser("experiment", help="run a seeded sweep")
    e.add_argument("--config", default=None, help="JSON config (default: threshold class defaults)")
    e.add_argument("--out", default=None, help="CSV output path")
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--summary-only", action="store_true")
    e.add_argument("--timing", action="store_true", help="fill the ms column with wall time")
    e.set_defaults(func=_cmd_experiment)

    st = sub.add_parser("selftest", help="run the invariant suites")
    st.add_argument("--suite", choices=SUITES + ("all",), default="all")
    st.set_defaults(func=_cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
