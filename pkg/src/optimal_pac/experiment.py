"""Seeded experiments comparing the recursive-majority learner with its baselines.

Every trial draws its own data from a seed derived deterministically from
``(base seed, algorithm, m, trial index)``, so a sweep gives the same
records whether trials run serially or in a process pool.

Seed derivation, bit-exact::

    splitmix64(x):
        x = (x + 0x9E3779B97F4A7C15) mod 2**64
        x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
        x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) mod 2**64
        return x ^ (x >> 31)

    mix_seed(base, algo, m, trial):
        h = splitmix64(base mod 2**64)
        for v in (ALGO_CODES[algo], m, trial):
            h = splitmix64(h ^ v)
        return h

The Monte Carlo error of a trial uses ``splitmix64(seed ^ MC_SALT)``.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import bounds
from .learners import (
    DEFAULT_TARGETS,
    ConceptClass,
    Ensemble,
    TargetSpec,
    exact_error,
    hypothesis_from_params,
    mc_error,
    train_erm,
    train_hanneke,
    train_simon,
)
from .invariants import check_trial_invariants

MASK64 = (1 << 64) - 1
ALGO_CODES = {"hanneke": 1, "simon": 2, "erm": 3}
MC_SALT = 0x4D43_4552_524F_5221
RECORD_COLUMNS = ("algo", "m", "trial", "seed", "error", "ensemble_size", "ms")
SUMMARY_COLUMNS = ("algo", "m", "trials", "median", "quantile", "success",
                   "theorem_bound", "vc_bound")


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def mix_seed(base: int, algo: str, m: int, trial: int) -> int:
    h = splitmix64(base & MASK64)
    for v in (ALGO_CODES[algo], m, trial):
        h = splitmix64(h ^ (v & MASK64))
    return h


@dataclass(frozen=True)
class ExperimentConfig:
    concept: ConceptClass = ConceptClass.THRESHOLD
    target: tuple[float, ...] | None = None
    algorithms: tuple[str, ...] = ("hanneke", "erm", "simon")
    m_grid: tuple[int, ...] = (16, 64, 256, 1024, 4096)
    trials: int | None = None
    eps: float = 0.05
    delta: float = 0.1
    seed: int = 0
    error_mode: str | None = None
    mc_points: int = 100_000
    simon_k: int | None = None
    check_invariants: bool = False

    def __post_init__(self):
        if isinstance(self.concept, str):
            object.__setattr__(self, "concept", ConceptClass(self.concept))
        for name in ("target", "algorithms", "m_grid"):
            val = getattr(self, name)
            if val is not None and not isinstance(val, tuple):
                object.__setattr__(self, name, tuple(val))
        if self.trials is None:
            object.__setattr__(self, "trials", 100 if self.concept is ConceptClass.RECTANGLE else 500)
        if self.error_mode is None:
            mode = "exact" if self.concept.input_dim == 1 else "mc"
            object.__setattr__(self, "error_mode", mode)
        self.validate()

    def validate(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.m_grid or any(m < 1 for m in self.m_grid):
            raise ValueError("m_grid must be a nonempty list of positive sizes")
        if any(a >= b for a, b in zip(self.m_grid, self.m_grid[1:])):
            raise ValueError("m_grid must be strictly increasing")
        if not 0 < self.eps <= 1:
            raise ValueError("eps must lie in (0, 1]")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        unknown = set(self.algorithms) - set(ALGO_CODES)
        if unknown or not self.algorithms:
            raise ValueError(f"unknown algorithms {sorted(unknown)}")
        if self.error_mode not in ("exact", "mc"):
            raise ValueError(f"error_mode must be 'exact' or 'mc', got {self.error_mode!r}")
        if self.mc_points < 1:
            raise ValueError("mc_points must be >= 1")
        self.spec  # target parameters must parse

    @property
    def spec(self) -> TargetSpec:
        if self.target is None:
            return TargetSpec(self.concept, DEFAULT_TARGETS[self.concept])
        return TargetSpec(self.concept, hypothesis_from_params(self.concept, self.target))

    @property
    def K(self) -> int:
        if self.simon_k is not None:
            return self.simon_k
        if self.eps >= 1:
            return 1
        return bounds.simon_opt_K(self.eps, self.delta, self.concept.vc_dim)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        if "class" in data:
            data["concept"] = data.pop("class")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        out = asdict(self)
        out["class"] = out.pop("concept").value
        return out


@dataclass(frozen=True)
class TrialRecord:
    algo: str
    m: int
    trial: int
    seed: int
    error: float
    ensemble_size: int
    wall_ms: float | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SummaryCell:
    algo: str
    m: int
    trials: int
    median: float
    quantile: float
    success: float
    theorem_bound: float
    vc_bound: float


@dataclass(frozen=True)
class SweepSummary:
    eps: float
    delta: float
    cells: tuple[SummaryCell, ...]

    def cell(self, algo: str, m: int) -> SummaryCell:
        for c in self.cells:
            if c.algo == algo and c.m == m:
                return c
        raise KeyError((algo, m))

    def for_algo(self, algo: str) -> list[SummaryCell]:
        return [c for c in self.cells if c.algo == algo]


def nearest_rank(values: Sequence[float], p: float) -> float:
    """Nearest-rank quantile: the ``ceil(p*n)``-th smallest value (the smallest for ``p = 0``)."""
    if not values:
        raise ValueError("quantile of no values")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    ordered = sorted(values)
    rank = max(1, math.ceil(p * len(ordered)))
    return ordered[rank - 1]


def train(algo: str, spec: TargetSpec, S, K: int = 1) -> Ensemble:
    if algo == "hanneke":
        return train_hanneke(spec, S)
    if algo == "simon":
        return train_simon(spec, S, K)
    if algo == "erm":
        return train_erm(spec, S)
    raise ValueError(f"unknown algorithm {algo!r}")


def run_trial(config: ExperimentConfig, algo: str, m: int, trial: int) -> TrialRecord:
    seed = mix_seed(config.seed, algo, m, trial)
    spec = config.spec
    start = time.perf_counter()
    X, y = spec.sample(m, np.random.default_rng(seed))
    ensemble = train(algo, spec, (X, y), config.K)
    if config.check_invariants and algo == "hanneke":
        check_trial_invariants(ensemble, X, y)
    if config.error_mode == "exact":
        err = exact_error(ensemble, spec)
    else:
        err = mc_error(ensemble, spec, config.mc_points, splitmix64(seed ^ MC_SALT))
    ms = (time.perf_counter() - start) * 1e3
    return TrialRecord(algo, m, trial, seed, err, len(ensemble), ms)


def _run_cell(args) -> list[TrialRecord]:
    config, algo, m, trials = args
    return [run_trial(config, algo, m, t) for t in trials]


def _cells(config: ExperimentConfig, chunk: int):
    for algo in config.algorithms:
        for m in config.m_grid:
            for start in range(0, config.trials, chunk):
                yield config, algo, m, range(start, min(start + chunk, config.trials))


def _sort_key(config: ExperimentConfig):
    order = {a: i for i, a in enumerate(config.algorithms)}
    return lambda r: (order[r.algo], r.m, r.trial)


def run_trials(config: ExperimentConfig, jobs: int = 1) -> list[TrialRecord]:
    tasks = list(_cells(config, chunk=25))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_cell, tasks))
    else:
        chunks = [_run_cell(t) for t in tasks]
    records = [r for c in chunks for r in c]
    records.sort(key=_sort_key(config))
    return records


def summarize(config: ExperimentConfig, records: Iterable[TrialRecord]) -> SweepSummary:
    d = config.concept.vc_dim
    grouped: dict[tuple[str, int], list[float]] = {}
    for r in records:
        grouped.setdefault((r.algo, r.m), []).append(r.error)
    cells = []
    for algo in config.algorithms:
        for m in config.m_grid:
            errs = grouped.get((algo, m))
            if not errs:
                continue
            cells.append(SummaryCell(
                algo=algo,
                m=m,
                trials=len(errs),
                median=nearest_rank(errs, 0.5),
                quantile=nearest_rank(errs, 1 - config.delta),
                success=sum(e <= config.eps for e in errs) / len(errs),
                theorem_bound=bounds.theorem_error_bound(m, config.delta, d),
                vc_bound=bounds.vc_consistency_bound(m, config.delta, d),
            ))
    return SweepSummary(config.eps, config.delta, tuple(cells))


def run_sweep(config: ExperimentConfig, jobs: int = 1) -> tuple[list[TrialRecord], SweepSummary]:
    records = run_trials(config, jobs)
    return records, summarize(config, records)


def estimate_sample_complexity(config: ExperimentConfig, summary: SweepSummary | None = None,
                               jobs: int = 1) -> dict:
    """Smallest grid size whose empirical success fraction reaches ``1 - delta``, per algorithm.

    Returns ``{"estimates": {algo: m or None}, "hanneke_bound": ..., "lower_bound": ...}``;
    the reference bounds are ``None`` when ``eps`` is outside their domain.
    """
    if summary is None:
        _, summary = run_sweep(config, jobs)
    estimates = {}
    for algo in config.algorithms:
        hits = [c.m for c in summary.for_algo(algo) if c.success >= 1 - config.delta]
        estimates[algo] = min(hits) if hits else None
    d = config.concept.vc_dim
    in_range = config.eps < 1
    return {
        "estimates": estimates,
        "hanneke_bound": bounds.hanneke_sample_bound(config.eps, config.delta, d) if in_range else None,
        "lower_bound": bounds.lower_bound(config.eps, config.delta, d) if in_range else None,
    }


# ---------------------------------------------------------------------------
# CSV


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def _write_rows(path, header, rows) -> None:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


def emit_csv(records: Sequence[TrialRecord], path, timing: bool = False) -> None:
    """Write one row per record, ordered by (algo, m, trial).

    Wall time is written only with ``timing=True``; otherwise the ``ms``
    column is left empty so the file is a pure function of the config.
    """
    rows = []
    for r in records:
        ms = _fmt(float(r.wall_ms)) if timing and r.wall_ms is not None else ""
        rows.append([r.algo, r.m, r.trial, r.seed, _fmt(float(r.error)), r.ensemble_size, ms])
    _write_rows(path, RECORD_COLUMNS, rows)


def read_csv(path) -> list[TrialRecord]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != RECORD_COLUMNS:
            raise ValueError(f"{path}: unexpected header {header}")
        out = []
        for row in reader:
            algo, m, trial, seed, err, size, ms = row
            out.append(TrialRecord(algo, int(m), int(trial), int(seed), float(err), int(size),
                                   float(ms) if ms else None))
    return out


def emit_summary_csv(summary: SweepSummary, path) -> None:
    rows = [[_fmt(getattr(c, col)) for col in SUMMARY_COLUMNS] for c in summary.cells]
    _write_rows(path, SUMMARY_COLUMNS, rows)


def default_config(concept: ConceptClass | str = ConceptClass.THRESHOLD, **overrides) -> ExperimentConfig:
    return ExperimentConfig(concept=ConceptClass(concept), **overrides)
