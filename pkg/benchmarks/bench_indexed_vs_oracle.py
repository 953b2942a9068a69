"""Indexed evaluator against the naive oracle, per indicator.

    python3 benchmarks/bench_indexed_vs_oracle.py [--n 50000] [--seed 3]

Store build time is reported separately; indicator times exclude it.
Set PATREG_DISABLE_NUMBA=1 to time the numpy kernel path instead.
"""

from __future__ import annotations

import argparse
import time

from patreg import indicators, kernels, oracle
from patreg.model import IndicatorKind, Params
from patreg.store import build_store
from patreg.synth import generate_fixture


def _time(fn) -> tuple[float, object]:
    t = time.perf_counter()
    out = fn()
    return time.perf_counter() - t, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=50_000)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--kinds", default=",".join(k.value for k in IndicatorKind))
    args = ap.parse_args()

    kernels.warmup()
    dataset = generate_fixture(seed=args.seed, n_applications=args.n)
    t_build, store = _time(lambda: build_store(dataset))
    params = Params()
    cohort = indicators.select_cohort(store, params.cohort)
    print(f"backend={kernels.BACKEND} n={args.n:,} rows={sum(dataset.summary().values()):,} "
          f"build={t_build:.3f}s cohort={len(cohort)}")
    print(f"{'indicator':<22}{'indexed s':>11}{'oracle s':>10}{'ratio':>9}")
    for name in args.kinds.split(","):
        kind = IndicatorKind(name)
        t_fast, fast = _time(lambda: indicators.evaluate(store, kind, params, cohort=cohort))
        t_slow, slow = _time(lambda: oracle.evaluate_naive(dataset, kind, params))
        flag = "" if fast == slow else "  MISMATCH"
        print(f"{name:<22}{t_fast:>11.4f}{t_slow:>10.3f}{t_slow / max(t_fast, 1e-9):>8.0f}x{flag}")


if __name__ == "__main__":
    main()
