"""Hand-specified applications that reproduce reference table rows.

Each scenario is one application's rows across all relations plus the
indicator values it must produce. Scenario identifiers are far below the
generator's ranges, so scenarios embed into any generated fixture.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..model import (
    Citation, CoreApplication, CorePublication, Dataset, Designation, FirstAgent,
    IndicatorKind, IpcAssignment, LegalStatusEvent, Licensee, LicenseeState, LicenseType,
    Party, PartyType, ProcedureStep, RegisterApplication, RegisterEvent, RegisterPublication,
)
from .generator import EPC_STATES

D = dt.date
K = IndicatorKind


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    rows: dict[str, list] = field(default_factory=dict)   # Dataset attribute -> row objects
    expected: dict[IndicatorKind, Any] = field(default_factory=dict)  # keyed by register id inside
    note: str = ""

    def dataset(self) -> Dataset:
        return Dataset.from_rows(**self.rows)


class ScenarioCollision(ValueError):
    pass


def _keys(ds: Dataset) -> dict[str, set]:
    return {
        "register id": set(ds.applications["id"].tolist()),
        "appln_id": set(ds.applications["appln_id"][ds.applications["appln_id"] > 0].tolist())
        | set(ds.core_applications["appln_id"].tolist()),
        "pat_publn_id": set(ds.core_publications["pat_publn_id"].tolist()),
    }


def embed_scenarios(dataset: Dataset, specs: list[ScenarioSpec]) -> Dataset:
    """Append scenario rows to a dataset; identifiers must not collide."""
    out = dataset
    for spec in specs:
        extra = spec.dataset()
        have, new = _keys(out), _keys(extra)
        for what in have:
            clash = have[what] & new[what]
            if clash:
                raise ScenarioCollision(f"scenario {spec.name!r}: {what} {sorted(clash)[:5]} already present")
        out = out.concat(extra)
    return out


def _base(rid: int, appln_id: int, filed: D, kind: str = "A") -> dict[str, list]:
    """A linked, cohort-eligible wind application with no other rows."""
    return {
        "applications": [RegisterApplication(rid, appln_id, filed, "Examination is in progress")],
        "core_applications": [CoreApplication(appln_id, "EP", kind, filed)],
        "ipc": [IpcAssignment(appln_id, "F03D 1/06")],
    }


def _applicant(rid: int, name: str, set_nr: int = 1, seq: int = 1, latest: bool = True,
               cust: str = "", bulletin: tuple[int, int] = (2005, 1)) -> Party:
    return Party(rid, PartyType.APPLICANT, seq, set_nr, latest, name, cust, *bulletin)


def backward_citations_86() -> ScenarioSpec:
    rid, appln = 8156970, 56608002
    rows = _base(rid, appln, D(2008, 6, 2))
    pubs = [9_100_001, 9_100_002, 9_100_003]
    rows["core_publications"] = [CorePublication(p, appln) for p in pubs]
    # 50 + 30 + 20 citations with 14 repeats across publications -> 86 distinct
    cited_a = list(range(700_001, 700_051))
    cited_b = list(range(700_041, 700_071))
    cited_c = list(range(700_067, 700_087)) + [700_001]
    cits = []
    for pub, cited in zip(pubs, (cited_a, cited_b, cited_c)):
        cits += [Citation(pub, c, k) for k, c in enumerate(cited, start=1)]
    cits += [Citation(pubs[0], 800_001, 0), Citation(pubs[1], 800_002, 0)]  # non-patent literature
    rows["citations"] = cits
    assert len(set(cited_a) | set(cited_b) | set(cited_c)) == 86
    return ScenarioSpec("backward-citations", rows, {K.BACKWARD_CITATIONS: {rid: 86}})


def _licensee_rows(rid: int, groups: list[list[str]], bulletin=(2012, 20)):
    lic, states = [], []
    for seq, countries in enumerate(groups, start=1):
        lic.append(Licensee(rid, seq, LicenseType.NEX, Designation.AS_INDICATED))
        states += [LicenseeState(rid, seq, c, *bulletin) for c in countries]
    return lic, states


def license_countries_37() -> ScenarioSpec:
    rid, appln = 10788117, 329924500
    rows = _base(rid, appln, D(2009, 11, 20))
    lic, states = _licensee_rows(rid, [list(EPC_STATES[:30]), list(EPC_STATES[20:37])])
    rows["licensees"], rows["licensee_states"] = lic, states
    return ScenarioSpec("license-countries", rows, {K.LICENSE_COUNTRIES: {rid: 37}})


def license_countries_36_of_62() -> ScenarioSpec:
    rid, appln = 10742603, 320770528
    rows = _base(rid, appln, D(2009, 10, 2))
    lic, states = _licensee_rows(rid, [list(EPC_STATES[:36]), list(EPC_STATES[10:36])])
    lic.append(Licensee(rid, 3, LicenseType.EXC, Designation.ALL))
    rows["licensees"], rows["licensee_states"] = lic, states
    assert len(states) == 62
    return ScenarioSpec("license-countries-dedup", rows, {K.LICENSE_COUNTRIES: {rid: 36}},
                        note="62 licensee-state rows, 36 distinct countries; licensee 3 covers all states")


def applicant_sets_6() -> ScenarioSpec:
    rid, appln = 3732247, 16049513
    rows = _base(rid, appln, D(2002, 2, 14))
    names = ["NEG Micon A/S", "NEG Micon A/S", "Vestas Wind Systems A/S", "Vestas Wind Systems A/S",
             "Vestas Wind Systems A/S", "Vestas Wind Systems A/S"]
    custs = ["C-NEG", "C-NEG", "C-VWS", "C-VWS", "C-VWS2", "C-VWS2"]
    bulletins = [(2003, 35), (2004, 10), (2004, 30), (2008, 12), (2011, 40), (2015, 20)]
    rows["parties"] = [
        _applicant(rid, n, s, 1, s == 6, c, b)
        for s, (n, c, b) in enumerate(zip(names, custs, bulletins), start=1)
    ]
    rows["events"] = [RegisterEvent(rid, "0009299APPR", D(2004, 2, 1)), RegisterEvent(rid, "0009012", D(2003, 1, 5))]
    return ScenarioSpec("applicant-sets", rows, {K.APPLICANT_SETS: {rid: 6}})


def days_to_exam_233() -> ScenarioSpec:
    rid, appln = 8005567, 189424
    rows = _base(rid, appln, D(2008, 3, 26))
    rows["events"] = [
        RegisterEvent(rid, "0009012", D(2008, 4, 2)),
        RegisterEvent(rid, "0009185", D(2009, 6, 1)),   # later duplicate; earliest wins
        RegisterEvent(rid, "0009185", D(2008, 11, 14)),
    ]
    return ScenarioSpec("days-to-exam", rows, {K.DAYS_TO_EXAM: {rid: 233}})


def first_representative_2000_30() -> ScenarioSpec:
    rid, appln = 100008, 15706408
    rows = _base(rid, appln, D(2000, 1, 13))
    rows["publications"] = [RegisterPublication(rid, "A1", 2000, 30), RegisterPublication(rid, "B1", 2004, 12)]
    rows["parties"] = [
        _applicant(rid, "Aerodyn Engineering GmbH", bulletin=(2000, 30)),
        Party(rid, PartyType.REPRESENTATIVE, 1, 1, False, "Strehl Schübel-Hopf & Partner", "", 2000, 30),
        Party(rid, PartyType.REPRESENTATIVE, 1, 2, True, "Maiwald Patentanwalts GmbH", "", 2003, 8),
    ]
    return ScenarioSpec("first-representative", rows, {
        K.FIRST_REPRESENTATIVE: {rid: FirstAgent(2000, 30, ("Strehl Schübel-Hopf & Partner",))},
    })


def bulletin_order_divergence() -> ScenarioSpec:
    """Publications in weeks 5 and 30 of 2001: week 5 is first, but '200130' < '20015' as text."""
    rid, appln = 104999, 15710001
    rows = _base(rid, appln, D(2000, 6, 1))
    rows["publications"] = [RegisterPublication(rid, "A1", 2001, 5), RegisterPublication(rid, "A3", 2001, 30)]
    rows["parties"] = [
        _applicant(rid, "Windtec Consulting GmbH", bulletin=(2001, 5)),
        Party(rid, PartyType.REPRESENTATIVE, 1, 1, False, "Agent of week 5", "", 2001, 5),
        Party(rid, PartyType.REPRESENTATIVE, 1, 2, True, "Agent of week 30", "", 2001, 30),
    ]
    return ScenarioSpec("bulletin-order-divergence", rows, {
        K.FIRST_REPRESENTATIVE: {
            "numeric": {rid: FirstAgent(2001, 5, ("Agent of week 5",))},
            "paper-compat": {rid: FirstAgent(2001, 30, ("Agent of week 30",))},
        },
    })


def validity_challenges_3() -> ScenarioSpec:
    rid, appln = 3711857, 16039187
    rows = _base(rid, appln, D(2003, 5, 30))
    rows["publications"] = [RegisterPublication(rid, "A1", 2004, 49), RegisterPublication(rid, "B1", 2012, 48)]
    rows["events"] = [
        RegisterEvent(rid, "0008299OPPO", D(2013, 8, 21)),
        RegisterEvent(rid, "0008299OPPO", D(2013, 8, 28)),
        RegisterEvent(rid, "0008299OPPO", D(2013, 9, 2)),
        RegisterEvent(rid, "0009185", D(2005, 1, 10)),
    ]
    return ScenarioSpec("validity-challenges", rows, {K.VALIDITY_CHALLENGES: {rid: 3}})


def validated_states_33() -> ScenarioSpec:
    rid, appln = 8001625, 16417372
    rows = _base(rid, appln, D(2008, 1, 25))
    countries = list(EPC_STATES[:33])
    prs = [LegalStatusEvent(appln, "PGFP", c, 2014) for c in countries]
    prs += [LegalStatusEvent(appln, "PGFP", c, 2013) for c in countries[:4]]  # data-error repeats
    prs += [LegalStatusEvent(appln, "PG25", "SE", None), LegalStatusEvent(appln, "REG", "", None)]
    rows["legal_status"] = prs
    rows["designated_states"] = []
    return ScenarioSpec("validated-states", rows, {K.VALIDATED_STATES: {rid: 33}})


def proc_steps_57() -> ScenarioSpec:
    rid, appln = 7900311, 56011933
    rows = _base(rid, appln, D(2007, 9, 3))
    codes = ["PFEE"] * 24 + ["LOPR"] * 21 + ["RFEE"] * 7 + ["EXAM"] * 5
    rows["proc_steps"] = [ProcedureStep(rid, c) for c in codes]
    rows["parties"] = [_applicant(rid, "Neuhäuser GmbH", cust="C-NEUH", bulletin=(2009, 11))]
    return ScenarioSpec("avg-proc-steps", rows, {K.AVG_PROC_STEPS: {"Neuhäuser GmbH": "57.00"}})


def reference_scenarios() -> list[ScenarioSpec]:
    return [
        backward_citations_86(),
        license_countries_37(),
        license_countries_36_of_62(),
        applicant_sets_6(),
        days_to_exam_233(),
        first_representative_2000_30(),
        bulletin_order_divergence(),
        validity_challenges_3(),
        validated_states_33(),
        proc_steps_57(),
    ]


def raw_state_rows(ds: Dataset, rid: int) -> int:
    """Licensee-state rows for one application, counted without de-duplication."""
    return int(np.count_nonzero(ds.licensee_states["id"] == rid))
