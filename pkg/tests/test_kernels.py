"""Both kernel backends against plain-Python definitions."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from patreg import kernels
from patreg.kernels import backend

BACKENDS = ["numpy"] + (["numba"] if kernels.BACKEND == "numba" else [])


@st.composite
def grouped(draw, max_groups=6, max_rows=40, hi=20):
    n_groups = draw(st.integers(0, max_groups))
    if n_groups == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.int64), 0
    owner = np.sort(np.array(draw(st.lists(st.integers(0, n_groups - 1), max_size=max_rows)), dtype=np.int64))
    vals = np.array(draw(st.lists(st.integers(-hi, hi), min_size=len(owner), max_size=len(owner))), dtype=np.int64)
    k2 = np.array(draw(st.lists(st.integers(0, 3), min_size=len(owner), max_size=len(owner))), dtype=np.int64)
    return owner, vals, k2, n_groups


def by_group(owner, vals, n):
    out = [[] for _ in range(n)]
    for o, v in zip(owner.tolist(), vals.tolist()):
        out[o].append(v)
    return out


@pytest.mark.parametrize("name", BACKENDS)
@given(data=grouped())
def test_group_distinct_count(name, data):
    owner, vals, _, n = data
    got = backend(name).group_distinct_count(owner, vals, n)
    assert got.tolist() == [len(set(g)) for g in by_group(owner, vals, n)]


@pytest.mark.parametrize("name", BACKENDS)
@given(data=grouped())
def test_group_max_min(name, data):
    owner, vals, _, n = data
    groups = by_group(owner, vals, n)
    k = backend(name)
    assert k.group_max(owner, vals, n, -99).tolist() == [max(g, default=-99) for g in groups]
    assert k.group_min(owner, vals, n, 99).tolist() == [min(g, default=99) for g in groups]


@pytest.mark.parametrize("name", BACKENDS)
@given(data=grouped())
def test_group_argmin2_picks_first_lexicographic_minimum(name, data):
    owner, k1, k2, n = data
    expected = []
    for g in range(n):
        pos = [i for i in range(len(owner)) if owner[i] == g]
        expected.append(min(pos, key=lambda i: (k1[i], k2[i], i)) if pos else -1)
    assert backend(name).group_argmin2(owner, k1, k2, n).tolist() == expected


@pytest.mark.parametrize("name", BACKENDS)
@given(counts=st.lists(st.integers(0, 4), max_size=10), offset=st.integers(0, 5))
def test_expand_segments(name, counts, offset):
    counts = np.array(counts, dtype=np.int64)
    starts = offset + np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64) if len(counts) else counts
    owner, pos = backend(name).expand_segments(starts, counts)
    exp = [(g, s + j) for g, (s, c) in enumerate(zip(starts.tolist(), counts.tolist())) for j in range(c)]
    assert list(zip(owner.tolist(), pos.tolist())) == exp


@pytest.mark.parametrize("name", BACKENDS)
@given(keys=st.sets(st.integers(-50, 50), max_size=20), queries=st.lists(st.integers(-60, 60), max_size=20))
def test_lookup_sorted(name, keys, queries):
    keys = np.array(sorted(keys), dtype=np.int64)
    got = backend(name).lookup_sorted(keys, np.array(queries, dtype=np.int64))
    index = {k: i for i, k in enumerate(keys.tolist())}
    assert got.tolist() == [index.get(q, -1) for q in queries]


def test_distinct_count_on_unsigned_keys():
    owner = np.array([0, 0, 1], dtype=np.int64)
    vals = np.array([2**63 + 5, 2**63 + 5, 7], dtype=np.uint64)
    for name in BACKENDS:
        assert backend(name).group_distinct_count(owner, vals, 2).tolist() == [1, 1]


def test_env_flag_selects_numpy():
    env = {**os.environ, "PATREG_DISABLE_NUMBA": "1"}
    out = subprocess.run([sys.executable, "-c", "from patreg import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
