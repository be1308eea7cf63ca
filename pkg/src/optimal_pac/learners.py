"""Concept classes, canonical ERM, majority-vote ensembles and error measurement.

Three classes are supported: thresholds on the line, closed intervals on the
line and axis-aligned closed rectangles in the plane. Each hypothesis is a
closed box ``[lo, hi]`` in its input space (a threshold ``t`` is the box
``[t, +inf]``), which lets ERM, prediction and ensemble voting share one
representation.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import kernels
from .subsample import level_sizes, subsample_count

INF = math.inf


class NotRealizableError(ValueError):
    """No hypothesis in the class labels the sample without mistakes."""


class ConceptClass(enum.Enum):
    THRESHOLD = "threshold"
    INTERVAL = "interval"
    RECTANGLE = "rectangle"

    @property
    def vc_dim(self) -> int:
        return {"threshold": 1, "interval": 2, "rectangle": 4}[self.value]

    @property
    def input_dim(self) -> int:
        return 2 if self is ConceptClass.RECTANGLE else 1

    @property
    def distribution(self) -> str:
        return "uniform-unit-square" if self is ConceptClass.RECTANGLE else "uniform-unit-interval"


@dataclass(frozen=True)
class Threshold:
    t: float

    def bounds(self):
        return (self.t,), (INF,)


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    @classmethod
    def empty(cls) -> "Interval":
        return cls(INF, -INF)

    @property
    def is_empty(self) -> bool:
        return self.a > self.b

    def bounds(self):
        return (self.a,), (self.b,)


@dataclass(frozen=True)
class Rectangle:
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    @classmethod
    def empty(cls) -> "Rectangle":
        return cls(INF, -INF, INF, -INF)

    @property
    def is_empty(self) -> bool:
        return self.x_lo > self.x_hi or self.y_lo > self.y_hi

    def bounds(self):
        return (self.x_lo, self.y_lo), (self.x_hi, self.y_hi)


Hypothesis = Union[Threshold, Interval, Rectangle]

_HYPOTHESIS_TYPE = {
    ConceptClass.THRESHOLD: Threshold,
    ConceptClass.INTERVAL: Interval,
    ConceptClass.RECTANGLE: Rectangle,
}


def class_of(h: Hypothesis) -> ConceptClass:
    for cls, typ in _HYPOTHESIS_TYPE.items():
        if isinstance(h, typ):
            return cls
    raise TypeError(f"not a hypothesis: {h!r}")


def hypothesis_from_params(cls: ConceptClass, params: Sequence[float]) -> Hypothesis:
    typ = _HYPOTHESIS_TYPE[cls]
    n = {ConceptClass.THRESHOLD: 1, ConceptClass.INTERVAL: 2, ConceptClass.RECTANGLE: 4}[cls]
    if len(params) != n:
        raise ValueError(f"{cls.value} takes {n} parameters, got {len(params)}")
    return typ(*(float(p) for p in params))


def hypothesis_from_box(cls: ConceptClass, lo, hi) -> Hypothesis:
    if cls is ConceptClass.THRESHOLD:
        return Threshold(float(lo[0]))
    if cls is ConceptClass.INTERVAL:
        return Interval(float(lo[0]), float(hi[0]))
    return Rectangle(float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1]))


@dataclass(frozen=True)
class LabeledExample:
    point: tuple[float, ...]
    label: int

    def __post_init__(self):
        if self.label not in (-1, 1):
            raise ValueError(f"label must be -1 or +1, got {self.label}")


@dataclass(frozen=True)
class TargetSpec:
    concept: ConceptClass
    target: Hypothesis

    def __post_init__(self):
        if class_of(self.target) is not self.concept:
            raise ValueError(f"target {self.target!r} is not a {self.concept.value}")

    @property
    def distribution(self) -> str:
        return self.concept.distribution

    def sample(self, m: int, rng: np.random.Generator):
        """Draw ``m`` uniform points and label them with the target."""
        X = rng.random((m, self.concept.input_dim))
        return X, predict_many(self.target, X)


DEFAULT_TARGETS = {
    ConceptClass.THRESHOLD: Threshold(0.5),
    ConceptClass.INTERVAL: Interval(0.25, 0.75),
    ConceptClass.RECTANGLE: Rectangle(0.2, 0.7, 0.3, 0.8),
}


def majority_label(votes: Sequence[int]) -> int:
    """+1 iff the vote sum is nonnegative; ties go to +1."""
    if len(votes) == 0:
        raise ValueError("majority of an empty vote list")
    return 1 if sum(votes) >= 0 else -1


@dataclass(frozen=True)
class Ensemble:
    members: tuple[Hypothesis, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("ensemble needs at least one member")

    def __len__(self) -> int:
        return len(self.members)

    def boxes(self):
        return _boxes(self.members)

    def vote_counts(self, X) -> np.ndarray:
        """Number of members voting +1 at each row of ``X``."""
        lo, hi = self.boxes()
        return kernels.box_vote_counts(lo, hi, _as_points(X, lo.shape[1]))

    def predict_many(self, X) -> np.ndarray:
        pos = self.vote_counts(X)
        return np.where(2 * pos >= len(self.members), 1, -1)

    def predict(self, x) -> int:
        return int(self.predict_many(np.atleast_1d(np.asarray(x, dtype=float))[None, :])[0])


Predictor = Union[Hypothesis, Ensemble]


def _boxes(members: Sequence[Hypothesis]):
    lo = np.array([h.bounds()[0] for h in members], dtype=np.float64)
    hi = np.array([h.bounds()[1] for h in members], dtype=np.float64)
    return lo, hi


def _as_points(X, dim: int) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1) if dim == 1 else X.reshape(1, -1)
    if X.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got {X.shape[1]}")
    return X


def predict_many(h: Predictor, X) -> np.ndarray:
    if isinstance(h, Ensemble):
        return h.predict_many(X)
    lo, hi = (np.asarray(b, dtype=np.float64) for b in h.bounds())
    X = _as_points(X, lo.shape[0])
    inside = np.all((lo <= X) & (X <= hi), axis=1)
    return np.where(inside, 1, -1)


def predict(h: Predictor, x) -> int:
    """Label of a single point; closed boundaries count as inside."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return int(predict_many(h, x[None, :])[0])


def _positive_box_stats(X: np.ndarray, y: np.ndarray):
    """Per-point ERM statistics: the point itself if positive, an empty box otherwise."""
    pos = (y == 1)[:, None]
    lo = np.where(pos, X, INF)
    hi = np.where(pos, X, -INF)
    return lo, hi


def _tight_box(cls: ConceptClass, lo, hi) -> Hypothesis:
    if cls is ConceptClass.THRESHOLD:
        return Threshold(float(lo[0]))
    if not np.all(lo <= hi):
        return _HYPOTHESIS_TYPE[cls].empty()
    return hypothesis_from_box(cls, lo, hi)


def _unpack(cls: ConceptClass, S):
    """Accept either ``(X, y)`` arrays or a sequence of LabeledExample."""
    if isinstance(S, tuple) and len(S) == 2 and not isinstance(S[0], LabeledExample):
        X, y = S
    else:
        X = [ex.point for ex in S]
        y = [ex.label for ex in S]
    X = np.asarray(X, dtype=np.float64).reshape(-1, cls.input_dim)
    y = np.asarray(y, dtype=np.int64).reshape(-1)
    if X.shape[0] != y.shape[0]:
        raise ValueError("points and labels differ in length")
    if y.size and not np.all((y == 1) | (y == -1)):
        raise ValueError("labels must be -1 or +1")
    return X, y


def erm_train(cls: ConceptClass, S) -> Hypothesis:
    """Canonical sample-consistent learner.

    threshold: smallest positive point (``+inf`` if none); interval and
    rectangle: tightest closed box around the positives (empty if none).

    Raises
    ------
    NotRealizableError
        If the canonical hypothesis mislabels any point, which for these
        classes happens exactly when no consistent hypothesis exists.
    """
    X, y = _unpack(cls, S)
    lo, hi = _positive_box_stats(X, y)
    h = _tight_box(cls, lo.min(axis=0, initial=INF), hi.max(axis=0, initial=-INF))
    if y.size and np.any(predict_many(h, X) != y):
        raise NotRealizableError(f"sample of size {y.size} is not realizable by {cls.value}")
    return h


def is_consistent(h: Predictor, X, y) -> bool:
    y = np.asarray(y)
    return bool(y.size == 0 or np.all(predict_many(h, X) == y))


def train_erm(spec: TargetSpec, S) -> Ensemble:
    return Ensemble((erm_train(spec.concept, S),))


def train_hanneke(spec: TargetSpec, S, method: str = "batched") -> Ensemble:
    """Majority vote of canonical ERM over every subsample of the recursive family.

    ``method="batched"`` computes all members at once from the family index
    matrix through the compiled kernel; ``method="reference"`` materializes
    each subsample and calls :func:`erm_train` on it. Both give the same
    ensemble.
    """
    cls = spec.concept
    X, y = _unpack(cls, S)
    erm_train(cls, (X, y))
    family = kernels.family_matrix(len(y))
    if method == "reference":
        members = tuple(erm_train(cls, (X[row], y[row])) for row in family)
    elif method == "batched":
        lo, hi = _positive_box_stats(X, y)
        mins, maxs = kernels.subsample_extrema(family, lo, hi)
        members = tuple(_tight_box(cls, a, b) for a, b in zip(mins, maxs))
    else:
        raise ValueError(f"unknown method {method!r}")
    assert len(members) == subsample_count(len(y))
    return Ensemble(members)


def simon_blocks(m: int, K: int) -> list[range]:
    """The ``2K-1`` consecutive equal blocks used by the independent-split baseline."""
    if K < 1:
        raise ValueError("K must be >= 1")
    n_blocks = 2 * K - 1
    if m < n_blocks:
        raise ValueError(f"need at least {n_blocks} examples for K={K}, got {m}")
    size = m // n_blocks
    return [range(b * size, (b + 1) * size) for b in range(n_blocks)]


def train_simon(spec: TargetSpec, S, K: int) -> Ensemble:
    X, y = _unpack(spec.concept, S)
    blocks = simon_blocks(len(y), K)
    return Ensemble(tuple(erm_train(spec.concept, (X[b.start:b.stop], y[b.start:b.stop]))
                          for b in blocks))


def branch_slices(m: int) -> tuple[range, range, range, range]:
    """Index ranges of the head and the three top-level blocks of a size-``m`` sample."""
    levels = level_sizes(m)
    if not levels:
        raise ValueError(f"m={m} has no top-level split")
    n, q = levels[0]
    n0 = n - 3 * q
    return range(0, n0), range(n0, n0 + q), range(n0 + q, n0 + 2 * q), range(n0 + 2 * q, m)


# ---------------------------------------------------------------------------
# error measurement


def _members(predictor: Predictor) -> tuple[Hypothesis, ...]:
    return predictor.members if isinstance(predictor, Ensemble) else (predictor,)


def _axis_cuts(boxes, axis):
    lo, hi = boxes
    vals = np.concatenate([lo[:, axis], hi[:, axis], [0.0, 1.0]])
    vals = vals[np.isfinite(vals)]
    return np.unique(np.clip(vals, 0.0, 1.0))


def _cell_vote_counts(members, cuts):
    """Number of members covering each grid cell, by a difference array over cell indices."""
    lo, hi = _boxes(members)
    dim = len(cuts)
    diff = np.zeros(tuple(len(c) for c in cuts), dtype=np.int64)
    first = np.empty((len(members), dim), dtype=np.int64)
    stop = np.empty((len(members), dim), dtype=np.int64)
    for a, c in enumerate(cuts):
        first[:, a] = np.searchsorted(c, np.clip(lo[:, a], 0.0, 1.0))
        stop[:, a] = np.searchsorted(c, np.clip(hi[:, a], 0.0, 1.0))
    live = np.all(first < stop, axis=1)
    first, stop = first[live], stop[live]
    for corner in itertools.product((0, 1), repeat=dim):
        idx = tuple(np.where(corner[a], stop[:, a], first[:, a]) for a in range(dim))
        np.add.at(diff, idx, (-1) ** sum(corner))
    for a in range(dim):
        diff = np.cumsum(diff, axis=a)
    return diff[tuple(slice(0, len(c) - 1) for c in cuts)]


def exact_error(predictor: Predictor, spec: TargetSpec) -> float:
    """Exact probability mass where ``predictor`` and the target disagree under the uniform distribution.

    The unit cube is cut at every box edge of the members and of the target;
    both classifiers are constant on the interior of each resulting cell, so
    summing the volumes of disagreeing cells is exact.
    """
    members = _members(predictor)
    dim = spec.concept.input_dim
    for h in members:
        if len(h.bounds()[0]) != dim:
            raise ValueError("predictor dimension does not match the target class")
    cuts = [_axis_cuts(_boxes(members + (spec.target,)), a) for a in range(dim)]
    votes = _cell_vote_counts(members, cuts)
    pred = 2 * votes >= len(members)
    truth = _cell_vote_counts((spec.target,), cuts) > 0
    vol = np.diff(cuts[0])
    for c in cuts[1:]:
        vol = np.multiply.outer(vol, np.diff(c))
    return float(np.sum(vol[pred != truth]))


def exact_error_1d(predictor: Predictor, spec: TargetSpec) -> float:
    """Exact disagreement length on the unit interval (sweep over all member breakpoints)."""
    if spec.concept.input_dim != 1:
        raise ValueError(f"exact_error_1d needs a one-dimensional class, got {spec.concept.value}")
    return exact_error(predictor, spec)


def mc_error(predictor: Predictor, spec: TargetSpec, n: int = 100_000, seed: int = 0) -> float:
    """Fraction of ``n`` seeded uniform points where ``predictor`` and the target disagree."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    X = rng.random((n, spec.concept.input_dim))
    return float(np.mean(predict_many(predictor, X) != predict_many(spec.target, X)))


# ---------------------------------------------------------------------------
# VC dimension by brute force


def _realizable(cls: ConceptClass, X, y) -> bool:
    try:
        erm_train(cls, (X, y))
    except NotRealizableError:
        return False
    return True


def is_shattered(cls: ConceptClass, points) -> bool:
    X = np.asarray(points, dtype=np.float64).reshape(-1, cls.input_dim)
    for labels in itertools.product((-1, 1), repeat=len(X)):
        if not _realizable(cls, X, np.array(labels)):
            return False
    return True


def shattering_vcdim(cls: ConceptClass, pool, cap: int = 6) -> int:
    """Size of the largest subset of ``pool`` (at most ``cap``) shattered by ``cls``.

    Any subset of a shattered set is shattered, so the search stops at the
    first size with no shattered subset.
    """
    pool = np.asarray(pool, dtype=np.float64).reshape(-1, cls.input_dim)
    best = 0
    for k in range(1, min(cap, len(pool)) + 1):
        if any(is_shattered(cls, pool[list(idx)])
               for idx in itertools.combinations(range(len(pool)), k)):
            best = k
        else:
            break
    return best
