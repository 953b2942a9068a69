"""Naive reference evaluator used as a test oracle and benchmark baseline.

Each function walks the raw relations row by row, the way the reference SQL
reads: scan, filter, join on equal keys, group, order. Join sides are
materialised into plain dicts per call; nothing is cached between calls and
nothing is shared with the indexed path except the model types.
"""

from __future__ import annotations

from collections import defaultdict
from decimal import Decimal
from fractions import Fraction

from .model import (
    AMENDMENT_KINDS, EXAM_EVENT_CODE, PGFP, ApplicantSteps, BulletinOrder, Cohort,
    CohortSpec, Dataset, ExamLag, FirstAgent, IndicatorKind, IndicatorResult, IndicatorRow,
    LicenseCoverage, OutputMode, Params, PartyType, StepMode, TransferSignals,
)


def naive_cohort(ds: Dataset, spec: CohortSpec) -> Cohort:
    core = {}
    for t1 in ds.core_applications.rows():
        core[t1.appln_id] = t1
    wind = set()
    for t9 in ds.ipc.rows():
        if not t9.ipc_class_symbol.startswith(spec.ipc_prefix):
            continue
        t1 = core.get(t9.appln_id)
        if t1 is None:
            continue
        if (t1.appln_auth == spec.authority and t1.appln_kind in spec.kinds
                and spec.year_from <= t1.appln_filing_date.year <= spec.year_to):
            wind.add(t1.appln_id)
    reg = {}
    for r101 in ds.applications.rows():
        if r101.appln_id != 0:
            reg[r101.appln_id] = r101.id
    members = sorted(wind)
    return Cohort(tuple(members), tuple(reg.get(a, 0) for a in members))


def _register_members(ds: Dataset, cohort: Cohort):
    """(r101 row) for every cohort member present in the register, keyed by id."""
    wanted = set(cohort.appln_ids)
    out = {}
    for r101 in ds.applications.rows():
        if r101.appln_id != 0 and r101.appln_id in wanted:
            out[r101.id] = r101
    return out


def _by_count(kind, members, counts, mode, skipped):
    rows = []
    for rid, r101 in members.items():
        n = counts.get(rid, 0)
        if mode is OutputMode.PAPER_COMPAT and n == 0:
            continue
        rows.append(IndicatorRow(rid, r101.appln_id, n))
    rows.sort(key=lambda r: (-r.value, r.id))
    return IndicatorResult(kind, tuple(rows), skipped)


def naive_backward_citations(ds, cohort, mode):
    members = _register_members(ds, cohort)
    appln_to_id = {r.appln_id: rid for rid, r in members.items()}
    publn_owner = {}
    for t211 in ds.core_publications.rows():
        if t211.appln_id in appln_to_id:
            publn_owner[t211.pat_publn_id] = appln_to_id[t211.appln_id]
    cited = defaultdict(set)
    for t212 in ds.citations.rows():
        if t212.pat_citn_seq_nr > 0 and t212.pat_publn_id in publn_owner:
            cited[publn_owner[t212.pat_publn_id]].add(t212.cited_pat_publn_id)
    counts = {rid: len(s) for rid, s in cited.items()}
    return _by_count(IndicatorKind.BACKWARD_CITATIONS, members, counts, mode, cohort.skipped)


def naive_license_countries(ds, cohort, mode):
    members = _register_members(ds, cohort)
    countries = defaultdict(set)
    for r112 in ds.licensee_states.rows():
        if r112.id in members:
            countries[r112.id].add(r112.licensee_country)
    has_all = set()
    for r111 in ds.licensees.rows():
        if r111.id in members and r111.designation.value == "all":
            has_all.add(r111.id)
    rows = []
    for rid, r101 in members.items():
        n = len(countries.get(rid, ()))
        if mode is OutputMode.PAPER_COMPAT and n == 0:
            continue
        rows.append(IndicatorRow(rid, r101.appln_id, LicenseCoverage(n, rid in has_all)))
    rows.sort(key=lambda r: (-r.value.nb_lic_ctry, r.id))
    return IndicatorResult(IndicatorKind.LICENSE_COUNTRIES, tuple(rows), cohort.skipped)


def naive_applicant_sets(ds, cohort, mode):
    members = _register_members(ds, cohort)
    best = {}
    for r107 in ds.parties.rows():
        if r107.id in members and r107.type is PartyType.APPLICANT:
            best[r107.id] = max(best.get(r107.id, 0), r107.set_seq_nr)
    return _by_count(IndicatorKind.APPLICANT_SETS, members, best, mode, cohort.skipped)


def naive_transfer_signals(ds, cohort, appr):
    members = _register_members(ds, cohort)
    sets, customers, appr_events = {}, defaultdict(set), defaultdict(int)
    for r107 in ds.parties.rows():
        if r107.id in members and r107.type is PartyType.APPLICANT:
            sets[r107.id] = max(sets.get(r107.id, 0), r107.set_seq_nr)
            if r107.customer_id:
                customers[r107.id].add(r107.customer_id)
    for r301 in ds.events.rows():
        if r301.id in members and appr.matches(r301.event_code):
            appr_events[r301.id] += 1
    rows = [
        IndicatorRow(rid, r101.appln_id,
                     TransferSignals(sets.get(rid, 0), len(customers.get(rid, ())), appr_events.get(rid, 0)))
        for rid, r101 in sorted(members.items())
    ]
    return IndicatorResult(IndicatorKind.TRANSFER_SIGNALS, tuple(rows), cohort.skipped)


def naive_days_to_exam(ds, cohort):
    members = _register_members(ds, cohort)
    first = {}
    for r301 in ds.events.rows():
        if r301.id in members and r301.event_code == EXAM_EVENT_CODE:
            if r301.id not in first or r301.event_date < first[r301.id]:
                first[r301.id] = r301.event_date
    rows, warnings = [], []
    for rid, exam_date in first.items():
        r101 = members[rid]
        days = (exam_date - r101.appln_filing_date).days
        rows.append(IndicatorRow(rid, r101.appln_id, ExamLag(days, r101.appln_filing_date, exam_date)))
    rows.sort(key=lambda r: (r.value.days_to_exam, r.id))
    for r in sorted(rows, key=lambda r: r.id):
        if r.value.days_to_exam < 0:
            warnings.append(f"negative examination lag for id {r.id}: {r.value.days_to_exam} days")
    return IndicatorResult(IndicatorKind.DAYS_TO_EXAM, tuple(rows), cohort.skipped, tuple(warnings))


def naive_first_representative(ds, cohort, ordering):
    members = _register_members(ds, cohort)
    if ordering is BulletinOrder.PAPER_COMPAT:
        def key(year, nr):
            return str(year) + str(nr)
    else:
        def key(year, nr):
            return (year, nr)
    first = {}
    for r102 in ds.publications.rows():
        if r102.id in members:
            k = key(r102.bulletin_year, r102.bulletin_nr)
            if r102.id not in first or k < first[r102.id][0]:
                first[r102.id] = (k, r102.bulletin_year, r102.bulletin_nr)
    agents = defaultdict(list)
    for r107 in ds.parties.rows():
        if r107.type is not PartyType.REPRESENTATIVE or r107.id not in first:
            continue
        if key(r107.bulletin_year, r107.bulletin_nr) == first[r107.id][0]:
            agents[r107.id].append((r107.set_seq_nr, r107.seq_nr, r107.name))
    rows = []
    for rid in sorted(agents):
        _, year, nr = first[rid]
        names = tuple(n for _, _, n in sorted(agents[rid]))
        rows.append(IndicatorRow(rid, members[rid].appln_id, FirstAgent(year, nr, names)))
    return IndicatorResult(IndicatorKind.FIRST_REPRESENTATIVE, tuple(rows), cohort.skipped)


def naive_validity_challenges(ds, cohort, codes, mode):
    members = _register_members(ds, cohort)
    counts = defaultdict(int)
    for r301 in ds.events.rows():
        if r301.id in members and r301.event_code in codes:
            counts[r301.id] += 1
    return _by_count(IndicatorKind.VALIDITY_CHALLENGES, members, counts, mode, cohort.skipped)


def naive_amendment_kinds(ds, cohort):
    members = _register_members(ds, cohort)
    kinds = defaultdict(set)
    for r102 in ds.publications.rows():
        if r102.id in members and r102.publn_kind in AMENDMENT_KINDS:
            kinds[r102.id].add(r102.publn_kind)
    rows = [IndicatorRow(rid, r.appln_id, tuple(sorted(kinds.get(rid, ())))) for rid, r in sorted(members.items())]
    return IndicatorResult(IndicatorKind.AMENDMENT_KINDS, tuple(rows), cohort.skipped)


def naive_validated_states(ds, cohort, mode):
    members = _register_members(ds, cohort)
    appln_to_id = {r.appln_id: rid for rid, r in members.items()}
    states = defaultdict(set)
    for t221 in ds.legal_status.rows():
        if t221.prs_code == PGFP and t221.appln_id in appln_to_id:
            states[appln_to_id[t221.appln_id]].add(t221.country)
    counts = {rid: len(s) for rid, s in states.items()}
    return _by_count(IndicatorKind.VALIDATED_STATES, members, counts, mode, cohort.skipped)


def _two_places(q: Fraction) -> Decimal:
    """Round a non-negative fraction half away from zero to hundredths."""
    hundredths = q * 100
    n = hundredths.numerator // hundredths.denominator
    if hundredths - n >= Fraction(1, 2):
        n += 1
    return Decimal(f"{n // 100}.{n % 100:02d}")


def naive_avg_proc_steps(ds, cohort, step_mode):
    members = _register_members(ds, cohort)
    latest = defaultdict(list)
    for r107 in ds.parties.rows():
        if r107.id in members and r107.type is PartyType.APPLICANT and r107.is_latest:
            latest[r107.id].append(r107)
    result = []
    if step_mode is StepMode.PAPER_FAITHFUL:
        joined = []  # (name, r201.id) per step row x latest-applicant row
        for r201 in ds.proc_steps.rows():
            for r107 in latest.get(r201.id, ()):
                joined.append((r107.name, r201.id))
        total, apps = defaultdict(int), defaultdict(set)
        for name, rid in joined:
            total[name] += 1
            apps[name].add(rid)
        for name in total:
            result.append(ApplicantSteps(name, _two_places(Fraction(total[name], len(apps[name])))))
    else:
        steps = defaultdict(int)
        for r201 in ds.proc_steps.rows():
            if r201.id in members:
                steps[r201.id] += 1
        apps = defaultdict(set)
        for rid, parties in latest.items():
            for r107 in parties:
                apps[r107.name].add(rid)
        for name, ids in apps.items():
            result.append(ApplicantSteps(name, _two_places(Fraction(sum(steps[i] for i in ids), len(ids)))))
    result.sort(key=lambda r: (-r.avg_proc_steps, r.name))
    return IndicatorResult(IndicatorKind.AVG_PROC_STEPS, tuple(result), cohort.skipped)


def evaluate_naive(dataset: Dataset, kind: IndicatorKind, params: Params = Params()) -> IndicatorResult:
    kind = IndicatorKind(kind)
    cohort = naive_cohort(dataset, params.cohort)
    K = IndicatorKind
    if kind is K.COHORT:
        rows = tuple(IndicatorRow(i, a, None) for a, i in zip(cohort.appln_ids, cohort.ids))
        return IndicatorResult(K.COHORT, rows, cohort.skipped)
    if kind is K.BACKWARD_CITATIONS:
        return naive_backward_citations(dataset, cohort, params.mode)
    if kind is K.LICENSE_COUNTRIES:
        return naive_license_countries(dataset, cohort, params.mode)
    if kind is K.APPLICANT_SETS:
        return naive_applicant_sets(dataset, cohort, params.mode)
    if kind is K.TRANSFER_SIGNALS:
        return naive_transfer_signals(dataset, cohort, params.appr)
    if kind is K.DAYS_TO_EXAM:
        return naive_days_to_exam(dataset, cohort)
    if kind is K.FIRST_REPRESENTATIVE:
        return naive_first_representative(dataset, cohort, params.ordering)
    if kind is K.VALIDITY_CHALLENGES:
        return naive_validity_challenges(dataset, cohort, params.challenge_codes, params.mode)
    if kind is K.AMENDMENT_KINDS:
        return naive_amendment_kinds(dataset, cohort)
    if kind is K.VALIDATED_STATES:
        return naive_validated_states(dataset, cohort, params.mode)
    if kind is K.AVG_PROC_STEPS:
        return naive_avg_proc_steps(dataset, cohort, params.step_mode)
    raise ValueError(f"unknown indicator {kind!r}")
