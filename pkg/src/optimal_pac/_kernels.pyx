# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_fallback.py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def family_matrix(Py_ssize_t m):
    cdef Py_ssize_t depth = 0, n = m, q, n_last, size, n_sub, j, t, b, r, col, start, skip, p3
    ns = []
    qs = []
    while n > 3:
        q = n // 4
        ns.append(n)
        qs.append(q)
        n -= 3 * q
        depth += 1
    n_last = n
    size = n_last
    for t in range(depth):
        size += 2 * qs[t]
    n_sub = 1
    for t in range(depth):
        n_sub *= 3

    cdef cnp.int64_t[:] n_v = np.asarray(ns, dtype=np.int64) if depth else np.zeros(1, dtype=np.int64)
    cdef cnp.int64_t[:] q_v = np.asarray(qs, dtype=np.int64) if depth else np.zeros(1, dtype=np.int64)
    out = np.empty((n_sub, size), dtype=np.int64)
    cdef cnp.int64_t[:, :] o = out

    for j in range(n_sub):
        col = 0
        for r in range(n_last):
            o[j, col] = r
            col += 1
        p3 = 1
        for t in range(depth - 1, -1, -1):
            skip = (j // p3) % 3
            p3 *= 3
            start = n_v[t] - 3 * q_v[t]
            for b in range(3):
                if b != skip:
                    for r in range(start + b * q_v[t], start + (b + 1) * q_v[t]):
                        o[j, col] = r
                        col += 1
    return out


def subsample_extrema(family, lo, hi):
    cdef const cnp.int64_t[:, :] fam = np.ascontiguousarray(family, dtype=np.int64)
    cdef const double[:, :] lo_v = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[:, :] hi_v = np.ascontiguousarray(hi, dtype=np.float64)
    cdef Py_ssize_t n_sub = fam.shape[0], size = fam.shape[1], dim = lo_v.shape[1]
    cdef Py_ssize_t j, r, c, idx
    cdef double v
    mins = np.full((n_sub, dim), np.inf)
    maxs = np.full((n_sub, dim), -np.inf)
    cdef double[:, :] mn = mins
    cdef double[:, :] mx = maxs
    with nogil:
        for j in range(n_sub):
            for r in range(size):
                idx = fam[j, r]
                for c in range(dim):
                    v = lo_v[idx, c]
                    if v < mn[j, c]:
                        mn[j, c] = v
                    v = hi_v[idx, c]
                    if v > mx[j, c]:
                        mx[j, c] = v
    return mins, maxs


def box_vote_counts(lo, hi, X):
    cdef const double[:, :] lo_v = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[:, :] hi_v = np.ascontiguousarray(hi, dtype=np.float64)
    cdef const double[:, :] x_v = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t k = lo_v.shape[0], n = x_v.shape[0], dim = x_v.shape[1]
    cdef Py_ssize_t i, h, c
    cdef cnp.int64_t cnt
    cdef bint inside
    counts = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[:] out = counts
    with nogil:
        for i in range(n):
            cnt = 0
            for h in range(k):
                inside = True
                for c in range(dim):
                    if x_v[i, c] < lo_v[h, c] or x_v[i, c] > hi_v[h, c]:
                        inside = False
                        break
                if inside:
                    cnt += 1
            out[i] = cnt
    return counts
