"""Invariants over generated fixtures: dedup, monotonicity, modes, cohort, determinism."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from patreg import indicators
from patreg.model import (
    BulletinOrder, CohortSpec, Dataset, IndicatorKind as K, OutputMode, Params,
)
from patreg.store import build_store
from patreg.synth import generate_fixture

import mutations

seeds = st.integers(0, 2**32 - 1)


def fixture(seed, n=60):
    return generate_fixture(seed=seed, n_applications=n, p_wind=0.9, year_from=2000, year_to=2010)


@settings(max_examples=40)
@given(seed=seeds, pick=st.integers(0, 2**32 - 1), which=st.sampled_from(mutations.MUTATORS))
def test_mutation_invariants(seed, pick, which):
    base = fixture(seed)
    m = which(base, np.random.default_rng(pick))
    if m is None:
        return
    assert mutations.check(base, m, mutations.counts(base, m.kind)) is None


ZERO_DROPPING = [K.BACKWARD_CITATIONS, K.LICENSE_COUNTRIES, K.APPLICANT_SETS,
                 K.VALIDITY_CHALLENGES, K.VALIDATED_STATES]


@settings(max_examples=25)
@given(seed=seeds)
def test_compat_rows_are_default_rows_without_zeros(seed):
    store = build_store(fixture(seed))
    for kind in ZERO_DROPPING:
        default = indicators.evaluate(store, kind, Params()).rows
        compat = indicators.evaluate(store, kind, Params(mode=OutputMode.PAPER_COMPAT)).rows
        assert compat == tuple(r for r in default if mutations._count(r.value) != 0)
    for kind in (K.DAYS_TO_EXAM, K.FIRST_REPRESENTATIVE, K.TRANSFER_SIGNALS, K.AMENDMENT_KINDS):
        assert (indicators.evaluate(store, kind, Params())
                == indicators.evaluate(store, kind, Params(mode=OutputMode.PAPER_COMPAT)))


def weeks_at_least_ten(ds: Dataset) -> Dataset:
    """Shift single-digit bulletin weeks in publications and parties alike."""
    def shift(t):
        nr = t["bulletin_nr"]
        return t.__class__(t.schema, {**t.columns, "bulletin_nr": np.where(nr < 10, nr + 40, nr)})
    return ds.replace(publications=shift(ds.publications), parties=shift(ds.parties))


@settings(max_examples=25)
@given(seed=seeds)
def test_bulletin_orderings_agree_when_weeks_have_two_digits(seed):
    store = build_store(weeks_at_least_ten(fixture(seed)))
    numeric = indicators.evaluate(store, K.FIRST_REPRESENTATIVE, Params(ordering=BulletinOrder.NUMERIC))
    compat = indicators.evaluate(store, K.FIRST_REPRESENTATIVE, Params(ordering=BulletinOrder.PAPER_COMPAT))
    assert numeric == compat


@settings(max_examples=25)
@given(seed=seeds, prefix=st.sampled_from(["F03D", "F03B", "H02", "F"]),
       years=st.tuples(st.integers(1996, 2014), st.integers(0, 8)))
def test_cohort_sound_and_complete(seed, prefix, years):
    ds = fixture(seed, 40)
    spec = CohortSpec(year_from=years[0], year_to=years[0] + years[1], ipc_prefix=prefix)
    cohort = indicators.select_cohort(build_store(ds), spec)
    tagged = {a for a, s in zip(ds.ipc["appln_id"].tolist(), ds.ipc["ipc_class_symbol"].tolist())
              if s.startswith(prefix)}
    expected = sorted(
        r.appln_id for r in ds.core_applications.rows()
        if r.appln_auth == "EP" and r.appln_kind in spec.kinds
        and spec.year_from <= r.appln_filing_date.year <= spec.year_to and r.appln_id in tagged
    )
    assert list(cohort.appln_ids) == expected
    assert len(set(cohort.appln_ids)) == len(cohort)


@pytest.mark.parametrize("kind", list(K))
def test_repeated_evaluation_is_identical(kind, scenario_dataset):
    store = build_store(scenario_dataset)
    assert indicators.evaluate(store, kind) == indicators.evaluate(store, kind)


@settings(max_examples=15)
@given(seed=seeds)
def test_rows_unique_by_key(seed):
    store = build_store(fixture(seed))
    for kind in K:
        rows = indicators.evaluate(store, kind).rows
        key = {K.COHORT: lambda r: r.appln_id, K.AVG_PROC_STEPS: lambda r: r.name}.get(kind, lambda r: r.id)
        assert len({key(r) for r in rows}) == len(rows), kind
