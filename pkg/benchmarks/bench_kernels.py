"""Kernel timings, numba backend against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--rows 2000000] [--repeat 5]

Each kernel runs on the same random (owner, value) arrays under both
backends. The first numba call is a warm-up and is not timed.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from patreg.kernels import backend


def _inputs(rows: int, groups: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    owner = np.sort(rng.integers(0, groups, rows))
    values = rng.integers(0, rows // 4 + 1, rows)
    k2 = rng.integers(1, 54, rows)
    counts = np.bincount(owner, minlength=groups)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    keys = np.unique(values)
    return {
        "expand_segments": (starts, counts),
        "group_distinct_count": (owner, values, groups),
        "group_max": (owner, values, groups, 0),
        "group_min": (owner, values, groups, np.iinfo(np.int64).max),
        "group_argmin2": (owner, values, k2, groups),
        "lookup_sorted": (keys, values),
    }


def _best(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=2_000_000)
    ap.add_argument("--groups", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    cases = _inputs(args.rows, args.groups)
    fast, slow = backend("numba"), backend("numpy")
    print(f"{args.rows:,} rows, {args.groups:,} groups, best of {args.repeat}")
    print(f"{'kernel':<22}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}")
    for name, call_args in cases.items():
        jit_fn, np_fn = getattr(fast, name), getattr(slow, name)
        a, b = jit_fn(*call_args), np_fn(*call_args)  # warm-up, and a parity spot check
        for x, y in zip(a if isinstance(a, tuple) else (a,), b if isinstance(b, tuple) else (b,)):
            assert np.array_equal(x, y), name
        t_jit, t_np = _best(jit_fn, call_args, args.repeat), _best(np_fn, call_args, args.repeat)
        print(f"{name:<22}{t_jit * 1e3:>10.2f}{t_np * 1e3:>10.2f}{t_np / t_jit:>8.1f}x")


if __name__ == "__main__":
    main()
