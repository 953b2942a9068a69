"""Pure-numpy grouped aggregation kernels.

Conventions shared with the numba backend: ``owner`` is a nondecreasing
int64 array of group labels in ``[0, n_groups)``; results are dense arrays
of length ``n_groups``.
"""

from __future__ import annotations

import numpy as np


def expand_segments(starts: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Flatten CSR slices into (owner, position) pairs."""
    counts = counts.astype(np.int64, copy=False)
    total = int(counts.sum())
    owner = np.repeat(np.arange(len(counts), dtype=np.int64), counts)
    if total == 0:
        return owner, np.empty(0, dtype=np.int64)
    seg_begin = np.cumsum(counts) - counts
    pos = np.arange(total, dtype=np.int64) - np.repeat(seg_begin, counts) + np.repeat(starts.astype(np.int64), counts)
    return owner, pos


def group_distinct_count(owner: np.ndarray, values: np.ndarray, n_groups: int) -> np.ndarray:
    if len(owner) == 0:
        return np.zeros(n_groups, dtype=np.int64)
    order = np.lexsort((values, owner))
    o, v = owner[order], values[order]
    first = np.ones(len(o), dtype=bool)
    first[1:] = (o[1:] != o[:-1]) | (v[1:] != v[:-1])
    return np.bincount(o[first], minlength=n_groups).astype(np.int64)


def group_max(owner: np.ndarray, values: np.ndarray, n_groups: int, fill: int) -> np.ndarray:
    out = np.full(n_groups, fill, dtype=np.int64)
    if len(owner):
        np.maximum.at(out, owner, values.astype(np.int64, copy=False))
    return out


def group_min(owner: np.ndarray, values: np.ndarray, n_groups: int, fill: int) -> np.ndarray:
    out = np.full(n_groups, fill, dtype=np.int64)
    if len(owner):
        np.minimum.at(out, owner, values.astype(np.int64, copy=False))
    return out


def group_argmin2(owner: np.ndarray, k1: np.ndarray, k2: np.ndarray, n_groups: int) -> np.ndarray:
    """Index (into the input arrays) of the lexicographic (k1, k2) minimum per group, -1 if empty.

    Ties resolve to the earliest input position.
    """
    out = np.full(n_groups, -1, dtype=np.int64)
    if len(owner) == 0:
        return out
    order = np.lexsort((np.arange(len(owner)), k2, k1, owner))
    o = owner[order]
    first = np.ones(len(o), dtype=bool)
    first[1:] = o[1:] != o[:-1]
    out[o[first]] = order[first]
    return out


def lookup_sorted(keys: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """Slot of each query in the sorted unique ``keys`` array, or -1."""
    if len(keys) == 0:
        return np.full(len(queries), -1, dtype=np.int64)
    slot = np.searchsorted(keys, queries)
    slot = np.minimum(slot, len(keys) - 1)
    return np.where(keys[slot] == queries, slot, -1).astype(np.int64)
