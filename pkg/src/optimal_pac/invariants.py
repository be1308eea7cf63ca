"""Structural checks on a trained recursive-majority ensemble.

Each function returns the number of violations so callers can count
assertions; :func:`check_trial_invariants` raises on the first failure.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .learners import Ensemble, branch_slices, is_consistent, predict_many
from .subsample import subsample_count


class InvariantError(AssertionError):
    pass


def member_violations(ensemble: Ensemble, X, y) -> int:
    """Members that mislabel some point of their own subsample."""
    family = kernels.family_matrix(len(y))
    if len(family) != len(ensemble):
        raise ValueError("ensemble does not match the family of this sample")
    return sum(not is_consistent(h, X[row], y[row]) for h, row in zip(ensemble.members, family))


def _branches(ensemble: Ensemble):
    n = len(ensemble)
    if n % 3:
        raise ValueError(f"ensemble of {n} members has no three-way branch split")
    k = n // 3
    return [Ensemble(ensemble.members[b * k:(b + 1) * k]) for b in range(3)]


def cross_branch_violations(ensemble: Ensemble, X, y) -> int:
    """(member, block) pairs where a member from branch k mislabels a top-level block it was handed.

    Branch k (0-based) carries every top-level block except block ``k+1`` in its
    tail, so all of its members must fit those two blocks exactly.
    """
    m = len(y)
    if m < 4:
        return 0
    blocks = branch_slices(m)[1:]
    bad = 0
    for k, branch in enumerate(_branches(ensemble)):
        for i, blk in enumerate(blocks):
            if i == k:
                continue
            sl = slice(blk.start, blk.stop)
            bad += sum(not is_consistent(h, X[sl], y[sl]) for h in branch.members)
    return bad


def branch_agreement_violations(ensemble: Ensemble, points) -> int:
    """Points where the full majority disagrees with all three branch majorities."""
    if len(ensemble) < 3:
        return 0
    full = predict_many(ensemble, points)
    agree = np.zeros(len(full), dtype=bool)
    for branch in _branches(ensemble):
        agree |= predict_many(branch, points) == full
    return int(np.sum(~agree))


def check_trial_invariants(ensemble: Ensemble, X, y, n_grid: int = 257) -> None:
    if len(ensemble) != subsample_count(len(y)):
        raise InvariantError(f"{len(ensemble)} members for m={len(y)}")
    if member_violations(ensemble, X, y):
        raise InvariantError("a member is inconsistent with its own subsample")
    if cross_branch_violations(ensemble, X, y):
        raise InvariantError("a member is inconsistent with a block in its tail")
    axes = [np.linspace(0, 1, n_grid)] * X.shape[1]
    grid = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    if branch_agreement_violations(ensemble, grid):
        raise InvariantError("majority disagrees with all three branch majorities")
