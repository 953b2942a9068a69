"""Numba-compiled versions of the grouped aggregation kernels.

Same signatures and results as ``_numpy``; the compiled loops exploit the
nondecreasing ``owner`` convention and never sort whole columns.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _expand(starts, counts):
    total = 0
    for c in counts:
        total += c
    owner = np.empty(total, dtype=np.int64)
    pos = np.empty(total, dtype=np.int64)
    k = 0
    for g in range(counts.shape[0]):
        s = starts[g]
        for j in range(counts[g]):
            owner[k] = g
            pos[k] = s + j
            k += 1
    return owner, pos


def expand_segments(starts, counts):
    return _expand(starts.astype(np.int64, copy=False), counts.astype(np.int64, copy=False))


@njit(cache=True)
def _distinct(owner, values, n_groups):
    out = np.zeros(n_groups, dtype=np.int64)
    n = owner.shape[0]
    i = 0
    while i < n:
        j = i
        while j < n and owner[j] == owner[i]:
            j += 1
        seg = np.sort(values[i:j])
        c = 1
        for k in range(1, seg.shape[0]):
            if seg[k] != seg[k - 1]:
                c += 1
        out[owner[i]] += c
        i = j
    return out


def group_distinct_count(owner, values, n_groups):
    return _distinct(owner, values, n_groups)


@njit(cache=True)
def _gmax(owner, values, n_groups, fill):
    out = np.full(n_groups, fill, dtype=np.int64)
    for k in range(owner.shape[0]):
        if values[k] > out[owner[k]]:
            out[owner[k]] = values[k]
    return out


@njit(cache=True)
def _gmin(owner, values, n_groups, fill):
    out = np.full(n_groups, fill, dtype=np.int64)
    for k in range(owner.shape[0]):
        if values[k] < out[owner[k]]:
            out[owner[k]] = values[k]
    return out


def group_max(owner, values, n_groups, fill):
    return _gmax(owner, values.astype(np.int64, copy=False), n_groups, fill)


def group_min(owner, values, n_groups, fill):
    return _gmin(owner, values.astype(np.int64, copy=False), n_groups, fill)


@njit(cache=True)
def _argmin2(owner, k1, k2, n_groups):
    out = np.full(n_groups, -1, dtype=np.int64)
    for k in range(owner.shape[0]):
        g = owner[k]
        b = out[g]
        if b < 0 or k1[k] < k1[b] or (k1[k] == k1[b] and k2[k] < k2[b]):
            out[g] = k
    return out


def group_argmin2(owner, k1, k2, n_groups):
    return _argmin2(owner, k1.astype(np.int64, copy=False), k2.astype(np.int64, copy=False), n_groups)


@njit(cache=True)
def _lookup(keys, queries):
    out = np.empty(queries.shape[0], dtype=np.int64)
    n = keys.shape[0]
    for q in range(queries.shape[0]):
        x = queries[q]
        lo, hi = 0, n
        while lo < hi:
            mid = (lo + hi) >> 1
            if keys[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        out[q] = lo if lo < n and keys[lo] == x else -1
    return out


def lookup_sorted(keys, queries):
    return _lookup(keys, queries)
