"""Pure-Python/numpy versions of the hot kernels.

Mirrors ``_kernels.pyx`` function for function; selected automatically when
the compiled module is unavailable.
"""

import numpy as np

from .subsample import level_sizes

_CHUNK = 1 << 22


def family_matrix(m):
    """Index matrix of the family built from the prefix working set ``[0, m)`` with empty tail.

    Row ``j`` is the ``j``-th subsample in recursion order, sorted ascending.
    Every subsample has the same length, so the family is rectangular.
    """
    levels = level_sizes(m)
    depth = len(levels)
    n_last = m
    for n, q in levels:
        n_last = n - 3 * q
    rows = []
    for j in range(3 ** depth):
        parts = [np.arange(n_last, dtype=np.int64)]
        # innermost depth holds the smallest indices, so walk depths backwards
        for t in range(depth - 1, -1, -1):
            n, q = levels[t]
            skip = (j // 3 ** (depth - 1 - t)) % 3
            head = n - 3 * q
            for b in range(3):
                if b != skip:
                    start = head + b * q
                    parts.append(np.arange(start, start + q, dtype=np.int64))
        rows.append(np.concatenate(parts))
    return np.vstack(rows)


def subsample_extrema(family, lo, hi):
    """Per-subsample columnwise ``min(lo)`` and ``max(hi)`` over the rows of ``family``."""
    family = np.asarray(family, dtype=np.int64)
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    if family.shape[1] == 0:
        n, dim = family.shape[0], lo.shape[1]
        return np.full((n, dim), np.inf), np.full((n, dim), -np.inf)
    return lo[family].min(axis=1), hi[family].max(axis=1)


def box_vote_counts(lo, hi, X):
    """For each row of ``X``, count the closed boxes ``[lo_k, hi_k]`` containing it."""
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    k = lo.shape[0]
    counts = np.zeros(X.shape[0], dtype=np.int64)
    if k == 0:
        return counts
    step = max(1, _CHUNK // (k * max(1, X.shape[1])))
    for start in range(0, X.shape[0], step):
        xs = X[start:start + step, None, :]
        inside = np.all((lo[None] <= xs) & (xs <= hi[None]), axis=2)
        counts[start:start + step] = inside.sum(axis=1)
    return counts
