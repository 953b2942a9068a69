"""Indexed-versus-oracle comparison over datasets and generated seeds."""

from __future__ import annotations

from typing import Iterable, Iterator

from . import indicators, oracle
from .model import Dataset, IndicatorKind, IndicatorResult, Params
from .store import build_store
from .synth import embed_scenarios, generate_fixture, reference_scenarios

PARAM_SETS = (Params(), Params.paper_compat())


def describe_difference(fast: IndicatorResult, slow: IndicatorResult) -> str | None:
    """First difference between two results as one line, or None when they are equal."""
    if fast == slow:
        return None
    kind = fast.kind.value
    for i, (a, b) in enumerate(zip(fast.rows, slow.rows)):
        if a != b:
            return f"{kind}: row {i}: indexed {a!r} != oracle {b!r}"
    if len(fast.rows) != len(slow.rows):
        return f"{kind}: indexed has {len(fast.rows)} rows, oracle has {len(slow.rows)}"
    if fast.skipped != slow.skipped:
        return f"{kind}: skipped members differ: {fast.skipped[:5]} vs {slow.skipped[:5]}"
    return f"{kind}: warnings differ: {fast.warnings[:2]} vs {slow.warnings[:2]}"


def first_difference(dataset: Dataset, param_sets: Iterable[Params] = PARAM_SETS,
                     kinds: Iterable[IndicatorKind] = tuple(IndicatorKind)) -> str | None:
    """Evaluate every kind both ways; return the first mismatch found."""
    store = build_store(dataset)
    kinds = tuple(kinds)
    for params in param_sets:
        cohort = indicators.select_cohort(store, params.cohort)
        for kind in kinds:
            diff = describe_difference(indicators.evaluate(store, kind, params, cohort=cohort),
                                       oracle.evaluate_naive(dataset, kind, params))
            if diff:
                return f"[mode={params.mode.value}] {diff}"
    return None


def seed_fixture(seed: int, max_n: int = 500) -> Dataset:
    """Generated fixture for one check seed: size varies with the seed, scenarios embedded."""
    n = 1 + (seed * 7919) % max_n
    return embed_scenarios(generate_fixture(seed=seed, n_applications=n), reference_scenarios())


def check_seeds(seeds: Iterable[int], max_n: int = 500) -> Iterator[tuple[int, str | None]]:
    for seed in seeds:
        yield seed, first_difference(seed_fixture(seed, max_n))
