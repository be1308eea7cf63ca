"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Inputs mirror one hanneke trial on the rectangle class: the family matrix
for m points, per-subsample extrema over it, and vote counting of the
resulting boxes on a block of evaluation points.
"""

import argparse
import sys
import timeit

import numpy as np

from optimal_pac.kernels import available_backends


def cases(rng, m, n_eval):
    X = rng.random((m, 2))
    lo = np.where(rng.random((m, 1)) < 0.5, X, np.inf)
    hi = np.where(np.isfinite(lo), X, -np.inf)
    return X, lo, hi, rng.random((n_eval, 2))


def bench(backends, m, n_eval, repeat):
    rng = np.random.default_rng(0)
    X, lo, hi, E = cases(rng, m, n_eval)
    fam = backends["python"].family_matrix(m)
    blo, bhi = backends["python"].subsample_extrema(fam, lo, hi)
    blo, bhi = np.where(np.isfinite(blo), blo, 1.0), np.where(np.isfinite(bhi), bhi, 0.0)
    rows = []
    for name, fn in [
        ("family_matrix", lambda b: b.family_matrix(m)),
        ("subsample_extrema", lambda b: b.subsample_extrema(fam, lo, hi)),
        ("box_vote_counts", lambda b: b.box_vote_counts(blo, bhi, E)),
    ]:
        timings = {}
        for bname, mod in backends.items():
            timings[bname] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=repeat))
        rows.append((name, timings))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--m", type=int, nargs="+", default=[256, 1024, 4096])
    ap.add_argument("--eval", type=int, default=20_000, dest="n_eval")
    args = ap.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled extension not built; timing the numpy fallback only", file=sys.stderr)
    names = list(backends)
    print(f"{'kernel':<18} {'m':>5} " + " ".join(f"{n + ' ms':>11}" for n in names)
          + ("   speedup" if len(names) == 2 else ""))
    for m in args.m:
        for kernel, t in bench(backends, m, args.n_eval, args.repeat):
            cols = " ".join(f"{1e3 * t[n]:>11.3f}" for n in names)
            extra = f"   {t['python'] / t['cython']:>6.1f}x" if len(names) == 2 else ""
            print(f"{kernel:<18} {m:>5} {cols}{extra}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
