"""Self-contained invariant suites, runnable without pytest.

``run_selftest`` drives four suites (structural, consistency, bounds,
statistical), counts every individual assertion and reports failures. The
membership rule used by the oracle-equivalence check can be swapped out,
which is how the mutation check verifies that the suite actually bites.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bounds, kernels
from .experiment import default_config, run_sweep
from .invariants import branch_agreement_violations, cross_branch_violations, member_violations
from .learners import ConceptClass, DEFAULT_TARGETS, TargetSpec, train_hanneke
from .subsample import build_subsamples, direct_member, enumerate_direct, subsample_count

SUITES = ("structural", "consistency", "bounds", "statistical")


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def check(self, cond, what: str) -> None:
        self.checks += 1
        if not cond:
            self.failures.append(what)

    @property
    def passed(self) -> bool:
        return not self.failures


def _structural(res: SuiteResult, member: Callable[[int, int, int], bool]) -> None:
    for ell in range(1, 6):
        direct = enumerate_direct(ell, member)
        rec = build_subsamples(range(4 ** ell))
        res.check(len(direct) == len(rec), f"ell={ell}: family sizes differ")
        for j, (a, b) in enumerate(zip(direct, rec)):
            res.check(a == b, f"ell={ell}: subsample {j} differs from the recursion")

    for ell in range(7):
        res.check(subsample_count(4 ** ell) == 3 ** ell, f"count(4^{ell}) != 3^{ell}")
    res.check(subsample_count(100) == 81, "count(100) != 81")
    # count(m) >= m still happens at m = 67..79; 80 is the first size past which it never does
    for m in range(80, 100_001):
        res.check(subsample_count(m) < m, f"count({m}) is not sublinear")

    rng = random.Random(20240611)
    for _ in range(200):
        m = rng.randint(0, 512)
        tail = sorted(rng.sample(range(m, m + 64), rng.randint(0, 8)))
        fam = build_subsamples(range(m), tail)
        res.check(len(fam) == subsample_count(m), f"m={m}: count law")
        allowed = set(range(m)) | set(tail)
        for sub in fam:
            res.check(set(tail) <= set(sub) <= allowed, f"m={m}: containment")
        if m >= 4:
            third = subsample_count(m) // 3
            res.check(all(len(b) == third for b in fam.branches()), f"m={m}: unequal branches")

    for m in list(range(0, 130)) + [255, 256, 257, 1000, 2048]:
        mat = kernels.family_matrix(m)
        rec = build_subsamples(range(m))
        res.check([tuple(r) for r in mat.tolist()] == list(rec.subsamples),
                  f"m={m}: kernel family differs from recursion")


def _consistency(res: SuiteResult, trials: int = 20) -> None:
    for concept in ConceptClass:
        spec = TargetSpec(concept, DEFAULT_TARGETS[concept])
        for m in (16, 64, 256):
            for t in range(trials):
                rng = np.random.default_rng([concept.vc_dim, m, t])
                X, y = spec.sample(m, rng)
                ens = train_hanneke(spec, (X, y))
                res.check(len(ens) == subsample_count(m), f"{concept.value} m={m}: size")
                res.check(member_violations(ens, X, y) == 0, f"{concept.value} m={m} t={t}: member")
                res.check(cross_branch_violations(ens, X, y) == 0,
                          f"{concept.value} m={m} t={t}: cross-branch")
                grid = rng.random((200, concept.input_dim))
                res.check(branch_agreement_violations(ens, grid) == 0,
                          f"{concept.value} m={m} t={t}: branch agreement")
            if m <= 64:
                rng = np.random.default_rng([99, m])
                X, y = spec.sample(m, rng)
                res.check(train_hanneke(spec, (X, y)) == train_hanneke(spec, (X, y), "reference"),
                          f"{concept.value} m={m}: batched != reference")


GOLDEN = {
    "vc_consistency_bound(100,0.1,1)": (lambda: bounds.vc_consistency_bound(100, 0.1, 1),
                                        0.26816958651102096),
    "hanneke_sample_bound(0.1,0.1,1)": (lambda: bounds.hanneke_sample_bound(0.1, 0.1, 1), 111473),
    "lower_bound(0.01,0.01,11)": (lambda: bounds.lower_bound(0.01, 0.01, 11), 455.9118484128211),
    "simon_bound(0.01,0.1,5,1,1)": (lambda: bounds.simon_bound(0.01, 0.1, 5, 1, 1.0),
                                    14608.746416747066),
    "log_star(65536)": (lambda: bounds.log_star(65536), 4),
}


def _bounds(res: SuiteResult, n_tuples: int = 20_000) -> None:
    for name, (fn, want) in GOLDEN.items():
        got = fn()
        if isinstance(want, int):
            res.check(got == want, f"{name}: {got} != {want}")
        else:
            res.check(math.isclose(got, want, rel_tol=1e-9), f"{name}: {got} != {want}")

    rng = random.Random(7)
    for _ in range(n_tuples):
        a, b = rng.uniform(1, 1e3), rng.uniform(1, 1e3)
        c1, c2 = rng.uniform(1, 1e2), rng.uniform(0, 1e2)
        res.check(bounds.log_factor_check(a, b, c1, c2), f"log factor fails at {(a, b, c1, c2)}")

    for k in range(65):
        x = 2.0 ** k
        naive, v = 0, x
        while v > 1:
            v, naive = math.log2(v), naive + 1
        res.check(bounds.log_star(x) == naive, f"log_star(2^{k})")

    for d in (1, 2, 4):
        for delta in (0.5, 0.1, 0.01):
            for eps in (0.3, 0.1, 0.05):
                scan = next(m for m in range(1, 100_000)
                            if bounds.vc_consistency_bound(m, delta, d) <= eps)
                res.check(bounds.invert_vc_bound(eps, delta, d) == scan,
                          f"invert_vc_bound({eps},{delta},{d}) != linear scan")

    eps_grid = [0.3, 0.1, 0.03, 0.01, 1e-3]
    for d in (1, 5, 50):
        for delta in (0.2, 0.01, 1e-4):
            vals = [bounds.hanneke_sample_bound(e, delta, d) for e in eps_grid]
            res.check(all(a <= b for a, b in zip(vals, vals[1:])), "hanneke not monotone in eps")
            vals = [bounds.lower_bound(e, delta, d) for e in eps_grid]
            res.check(all(a <= b for a, b in zip(vals, vals[1:])), "lower not monotone in eps")


def _statistical(res: SuiteResult, trials: int = 200) -> None:
    cfg = default_config("threshold", algorithms=("hanneke", "erm"), m_grid=(64, 256, 1024),
                         trials=trials, delta=0.1, seed=11)
    _, summary = run_sweep(cfg)
    h = {c.m: c for c in summary.for_algo("hanneke")}
    res.check(h[1024].median <= 0.35 * h[256].median, "median error does not decay like 1/m")
    for c in summary.cells:
        res.check(c.quantile <= c.theorem_bound, f"{c.algo} m={c.m}: above theorem bound")
        if c.algo == "erm":
            res.check(c.quantile <= c.vc_bound, f"erm m={c.m}: above consistency bound")


def run_selftest(suites=SUITES, member=direct_member, echo=print) -> dict[str, SuiteResult]:
    runners = {
        "structural": lambda r: _structural(r, member),
        "consistency": _consistency,
        "bounds": _bounds,
        "statistical": _statistical,
    }
    results = {}
    for name in suites:
        res = SuiteResult(name)
        start = time.perf_counter()
        runners[name](res)
        res.seconds = time.perf_counter() - start
        results[name] = res
        if echo:
            status = "PASS" if res.passed else f"FAIL ({len(res.failures)} failures)"
            echo(f"{name:12s} {res.checks:8d} checks  {res.seconds:6.2f}s  {status}")
            for f in res.failures[:10]:
                echo(f"    - {f}")
    if echo:
        total = sum(r.checks for r in results.values())
        echo(f"{'total':12s} {total:8d} checks")
    return results
