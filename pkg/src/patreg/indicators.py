"""Cohort selection and per-application indicators over an IndexedStore.

All operations work on whole cohorts at once: member keys are expanded
through the store's CSR indexes into (member, row) pairs and reduced with
the grouped kernels. Result order is always total so output is
deterministic.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal
from typing import Callable

import numpy as np

from . import kernels
from .model import (
    AMENDMENT_KINDS, EXAM_EVENT_CODE, PGFP, VALIDITY_CHALLENGE_CODES,
    ApplicantSteps, ApprRule, BulletinOrder, Cohort, CohortSpec, ExamLag, FirstAgent,
    IndicatorKind, IndicatorResult, IndicatorRow, LicenseCoverage, OutputMode, Params,
    StepMode, TransferSignals, factorize,
)
from .store import IndexedStore

_EMPTY = np.empty(0, dtype=np.int64)
_CENT = Decimal("0.01")


def select_cohort(store: IndexedStore, spec: CohortSpec = CohortSpec()) -> Cohort:
    ipc = store.dataset.ipc
    prefix = spec.ipc_prefix
    if len(prefix) >= 4:
        rows = store.ipc_by_prefix.get(prefix[:4], _EMPTY)
        if len(prefix) > 4:
            symbols = ipc["ipc_class_symbol"][rows]
            rows = rows[np.fromiter((s.startswith(prefix) for s in symbols), dtype=bool, count=len(rows))]
    else:
        buckets = [v for k, v in store.ipc_by_prefix.items() if k.startswith(prefix)]
        rows = np.concatenate(buckets) if buckets else _EMPTY
    candidates = np.unique(ipc["appln_id"][rows])
    crow = store.core_by_appln.unique_rows(candidates)
    found = crow >= 0
    candidates, crow = candidates[found], crow[found]

    core = store.dataset.core_applications
    years = core["appln_filing_date"][crow].astype("datetime64[Y]").astype(np.int64) + 1970
    ok = (core["appln_auth"][crow] == spec.authority) & (years >= spec.year_from) & (years <= spec.year_to)
    ok &= np.isin(core["appln_kind"][crow], np.array(sorted(spec.kinds), dtype=object))
    members = candidates[ok]

    reg = store.by_appln_id.unique_rows(members)
    ids = np.where(reg >= 0, store.dataset.applications["id"][np.maximum(reg, 0)] if len(reg) else 0, 0)
    return Cohort(tuple(members.tolist()), tuple(np.asarray(ids, dtype=np.int64).tolist()))


class _Members:
    """Cohort members that resolve to a register row."""

    def __init__(self, store: IndexedStore, cohort: Cohort):
        ids = np.asarray(cohort.ids, dtype=np.int64)
        keep = ids > 0
        self.ids = ids[keep]
        self.appln_ids = np.asarray(cohort.appln_ids, dtype=np.int64)[keep]
        self.reg_rows = store.by_id.unique_rows(self.ids)
        self.skipped = cohort.skipped
        self.n = len(self.ids)


def _ranked(kind: IndicatorKind, m: _Members, keep: np.ndarray, sort_keys: tuple,
            make_value: Callable[[int], object] | np.ndarray, warnings: tuple[str, ...] = ()) -> IndicatorResult:
    """Rows for members where ``keep`` holds, ordered by np.lexsort(sort_keys) (last key primary).

    ``make_value`` is either a per-member callable or an integer array of values.
    """
    sel = np.flatnonzero(keep)
    order = sel[np.lexsort(tuple(k[sel] for k in sort_keys))] if len(sel) else sel
    if isinstance(make_value, np.ndarray):
        values = make_value[order].tolist()
    else:
        values = [make_value(i) for i in order.tolist()]
    rows = tuple(map(IndicatorRow, m.ids[order].tolist(), m.appln_ids[order].tolist(), values))
    return IndicatorResult(kind, rows, m.skipped, warnings)


def _keep(values: np.ndarray, mode: OutputMode) -> np.ndarray:
    if mode is OutputMode.PAPER_COMPAT:
        return values != 0
    return np.ones(len(values), dtype=bool)


def cohort_result(cohort: Cohort) -> IndicatorResult:
    rows = tuple(IndicatorRow(i, a, None) for a, i in zip(cohort.appln_ids, cohort.ids))
    return IndicatorResult(IndicatorKind.COHORT, rows, cohort.skipped)


def backward_citation_count(store: IndexedStore, cohort: Cohort,
                            mode: OutputMode = OutputMode.DEFAULT) -> IndicatorResult:
    m = _Members(store, cohort)
    d = store.dataset
    pub_owner, pub_rows = store.core_pubs_by_appln.gather(m.appln_ids)
    cit_owner, cit_rows = store.citations_by_publn.gather(d.core_publications["pat_publn_id"][pub_rows])
    owner = pub_owner[cit_owner]
    qualifying = d.citations["pat_citn_seq_nr"][cit_rows] > 0
    n_cit = kernels.group_distinct_count(owner[qualifying], d.citations["cited_pat_publn_id"][cit_rows][qualifying], m.n)
    return _ranked(IndicatorKind.BACKWARD_CITATIONS, m, _keep(n_cit, mode), (m.ids, -n_cit),
                   n_cit)


def license_country_coverage(store: IndexedStore, cohort: Cohort,
                             mode: OutputMode = OutputMode.DEFAULT) -> IndicatorResult:
    m = _Members(store, cohort)
    owner, rows = store.licensee_states_by_id.gather(m.ids)
    counts = kernels.group_distinct_count(owner, store.licensee_country_keys[rows], m.n)
    lic_owner, lic_rows = store.licensees_by_id.gather(m.ids)
    all_desig = store.dataset.licensees["designation"][lic_rows] == "all"
    has_all = np.bincount(lic_owner[all_desig], minlength=m.n) > 0
    return _ranked(IndicatorKind.LICENSE_COUNTRIES, m, _keep(counts, mode), (m.ids, -counts),
                   lambda i: LicenseCoverage(int(counts[i]), bool(has_all[i])))


def _applicant_rows(store: IndexedStore, m: _Members) -> tuple[np.ndarray, np.ndarray]:
    owner, rows = store.parties_by_id.gather(m.ids)
    is_a = store.dataset.parties["type"][rows] == "A"
    return owner[is_a], rows[is_a]


def applicant_set_count(store: IndexedStore, cohort: Cohort,
                        mode: OutputMode = OutputMode.DEFAULT) -> IndicatorResult:
    m = _Members(store, cohort)
    owner, rows = _applicant_rows(store, m)
    nb = kernels.group_max(owner, store.dataset.parties["set_seq_nr"][rows], m.n, 0)
    return _ranked(IndicatorKind.APPLICANT_SETS, m, _keep(nb, mode), (m.ids, -nb), nb)


def _code_hits(store: IndexedStore, accept: Callable[[str], bool]) -> np.ndarray:
    """Boolean per events row: does its code satisfy ``accept``."""
    table = np.fromiter((accept(c) for c in store.event_codes), dtype=bool, count=len(store.event_codes))
    return table[store.event_code_ids] if len(table) else np.zeros(0, dtype=bool)


def transfer_signals(store: IndexedStore, cohort: Cohort, appr: ApprRule = ApprRule()) -> IndicatorResult:
    m = _Members(store, cohort)
    parties = store.dataset.parties
    owner, rows = _applicant_rows(store, m)
    n_sets = kernels.group_max(owner, parties["set_seq_nr"][rows], m.n, 0)
    cust = parties["customer_id"][rows]
    has_cust = cust != ""
    cust_codes, _ = factorize(cust[has_cust])
    n_cust = kernels.group_distinct_count(owner[has_cust], cust_codes, m.n)
    ev_owner, ev_rows = store.events_by_id.gather(m.ids)
    hits = _code_hits(store, appr.matches)[ev_rows]
    n_appr = np.bincount(ev_owner[hits], minlength=m.n)
    return _ranked(IndicatorKind.TRANSFER_SIGNALS, m, np.ones(m.n, dtype=bool), (m.ids,),
                   lambda i: TransferSignals(int(n_sets[i]), int(n_cust[i]), int(n_appr[i])))


def days_to_first_examination(store: IndexedStore, cohort: Cohort,
                              mode: OutputMode = OutputMode.DEFAULT) -> IndicatorResult:
    m = _Members(store, cohort)
    d = store.dataset
    owner, rows = store.events_by_id.gather(m.ids)
    exam = _code_hits(store, lambda c: c == EXAM_EVENT_CODE)[rows]
    sentinel = np.iinfo(np.int64).max
    first = kernels.group_min(owner[exam], d.events["event_date"][rows][exam].astype(np.int64), m.n, sentinel)
    present = first != sentinel
    filing = d.applications["appln_filing_date"][m.reg_rows].astype(np.int64) if m.n else _EMPTY
    days = np.where(present, first - filing, 0)
    warnings = tuple(
        f"negative examination lag for id {m.ids[i]}: {days[i]} days"
        for i in sorted(np.flatnonzero(present & (days < 0)), key=lambda i: m.ids[i])
    )
    epoch = np.datetime64("1970-01-01", "D")

    def value(i: int) -> ExamLag:
        return ExamLag(int(days[i]), (epoch + int(filing[i])).item(), (epoch + int(first[i])).item())

    return _ranked(IndicatorKind.DAYS_TO_EXAM, m, present, (m.ids, days), value, warnings)


def _lexical_rank(numbers: np.ndarray) -> np.ndarray:
    """Rank of each number's decimal string in string order."""
    uniq = np.unique(numbers)
    by_text = sorted(uniq.tolist(), key=str)
    rank = {v: r for r, v in enumerate(by_text)}
    return np.array([rank[v] for v in numbers.tolist()], dtype=np.int64)


def first_representative(store: IndexedStore, cohort: Cohort,
                         ordering: BulletinOrder = BulletinOrder.NUMERIC) -> IndicatorResult:
    m = _Members(store, cohort)
    d = store.dataset
    pubs, parties = d.publications, d.parties
    owner, rows = store.publications_by_id.gather(m.ids)
    year = pubs["bulletin_year"][rows]
    nr = pubs["bulletin_nr"][rows]
    # Years are four digits, so comparing year||week strings reduces to
    # comparing years, then week numbers as text.
    week_key = _lexical_rank(nr) if ordering is BulletinOrder.PAPER_COMPAT else nr
    best = kernels.group_argmin2(owner, year, week_key, m.n)
    has_pub = best >= 0
    b_year = np.where(has_pub, year[np.maximum(best, 0)] if len(rows) else 0, 0)
    b_nr = np.where(has_pub, nr[np.maximum(best, 0)] if len(rows) else 0, 0)

    p_owner, p_rows = store.parties_by_id.gather(m.ids)
    match = ((parties["type"][p_rows] == "R") & has_pub[p_owner]
             & (parties["bulletin_year"][p_rows] == b_year[p_owner])
             & (parties["bulletin_nr"][p_rows] == b_nr[p_owner]))
    p_owner, p_rows = p_owner[match], p_rows[match]
    names: dict[int, list] = {}
    for o, s, q, name in zip(p_owner.tolist(), parties["set_seq_nr"][p_rows].tolist(),
                             parties["seq_nr"][p_rows].tolist(), parties["name"][p_rows].tolist()):
        names.setdefault(o, []).append((s, q, name))
    keep = np.zeros(m.n, dtype=bool)
    keep[list(names)] = True
    return _ranked(
        IndicatorKind.FIRST_REPRESENTATIVE, m, keep, (m.ids,),
        lambda i: FirstAgent(int(b_year[i]), int(b_nr[i]), tuple(n for _, _, n in sorted(names[i]))),
    )


def validity_challenge_count(store: IndexedStore, cohort: Cohort,
                             codes: frozenset[str] = VALIDITY_CHALLENGE_CODES,
                             mode: OutputMode = OutputMode.DEFAULT) -> IndicatorResult:
    m = _Members(store, cohort)
    owner, rows = store.events_by_id.gather(m.ids)
    hits = _code_hits(store, lambda c: c in codes)[rows]
    nb = np.bincount(owner[hits], minlength=m.n)
    return _ranked(IndicatorKind.VALIDITY_CHALLENGES, m, _keep(nb, mode), (m.ids, -nb), nb)


def post_grant_amendment_kinds(store: IndexedStore, cohort: Cohort) -> IndicatorResult:
    m = _Members(store, cohort)
    owner, rows = store.publications_by_id.gather(m.ids)
    kinds = store.dataset.publications["publn_kind"][rows]
    found: dict[int, set] = {}
    for o, k in zip(owner.tolist(), kinds.tolist()):
        if k in AMENDMENT_KINDS:
            found.setdefault(o, set()).add(k)
    return _ranked(IndicatorKind.AMENDMENT_KINDS, m, np.ones(m.n, dtype=bool), (m.ids,),
                   lambda i: tuple(sorted(found.get(i, ()))))


def validated_state_count(store: IndexedStore, cohort: Cohort,
                          mode: OutputMode = OutputMode.DEFAULT) -> IndicatorResult:
    m = _Members(store, cohort)
    owner, rows = store.legal_by_appln.gather(m.appln_ids)
    pgfp = store.dataset.legal_status["prs_code"][rows] == PGFP
    nb = kernels.group_distinct_count(owner[pgfp], store.legal_country_keys[rows][pgfp], m.n)
    return _ranked(IndicatorKind.VALIDATED_STATES, m, _keep(nb, mode), (m.ids, -nb), nb)


def round_half_away(numerator: int, denominator: int) -> Decimal:
    return (Decimal(numerator) / Decimal(denominator)).quantize(_CENT, rounding=ROUND_HALF_UP)


def avg_procedure_steps_by_applicant(store: IndexedStore, cohort: Cohort,
                                     mode: StepMode = StepMode.NORMALIZED) -> IndicatorResult:
    m = _Members(store, cohort)
    parties = store.dataset.parties
    owner, rows = store.parties_by_id.gather(m.ids)
    latest = (parties["type"][rows] == "A") & parties["is_latest"][rows]
    owner, rows = owner[latest], rows[latest]
    steps = store.steps_by_id.count_of(m.ids)
    name_code, names = factorize(parties["name"][rows])
    n_names = len(names)
    pair_steps = steps[owner]
    if mode is StepMode.PAPER_FAITHFUL:
        # each latest-applicant row joins every step row of its application
        sel = pair_steps > 0
        num = np.zeros(n_names, dtype=np.int64)
        np.add.at(num, name_code[sel], pair_steps[sel])
        den_pairs = np.unique(name_code[sel] * max(m.n, 1) + owner[sel])
    else:
        den_pairs, first = np.unique(name_code * max(m.n, 1) + owner, return_index=True)
        num = np.zeros(n_names, dtype=np.int64)
        np.add.at(num, name_code[first], pair_steps[first])
    den = np.bincount(den_pairs // max(m.n, 1), minlength=n_names)
    out = [ApplicantSteps(names[k], round_half_away(int(num[k]), int(den[k])))
           for k in range(n_names) if den[k] > 0]
    out.sort(key=lambda r: (-r.avg_proc_steps, r.name))
    return IndicatorResult(IndicatorKind.AVG_PROC_STEPS, tuple(out), m.skipped)


def evaluate(store: IndexedStore, kind: IndicatorKind, params: Params = Params(),
             cohort: Cohort | None = None) -> IndicatorResult:
    """Run one indicator (or cohort selection) with the given parameters."""
    kind = IndicatorKind(kind)
    if cohort is None:
        cohort = select_cohort(store, params.cohort)
    K = IndicatorKind
    if kind is K.COHORT:
        return cohort_result(cohort)
    if kind is K.BACKWARD_CITATIONS:
        return backward_citation_count(store, cohort, params.mode)
    if kind is K.LICENSE_COUNTRIES:
        return license_country_coverage(store, cohort, params.mode)
    if kind is K.APPLICANT_SETS:
        return applicant_set_count(store, cohort, params.mode)
    if kind is K.TRANSFER_SIGNALS:
        return transfer_signals(store, cohort, params.appr)
    if kind is K.DAYS_TO_EXAM:
        return days_to_first_examination(store, cohort, params.mode)
    if kind is K.FIRST_REPRESENTATIVE:
        return first_representative(store, cohort, params.ordering)
    if kind is K.VALIDITY_CHALLENGES:
        return validity_challenge_count(store, cohort, params.challenge_codes, params.mode)
    if kind is K.AMENDMENT_KINDS:
        return post_grant_amendment_kinds(store, cohort)
    if kind is K.VALIDATED_STATES:
        return validated_state_count(store, cohort, params.mode)
    if kind is K.AVG_PROC_STEPS:
        return avg_procedure_steps_by_applicant(store, cohort, params.step_mode)
    raise ValueError(f"unknown indicator {kind!r}")
