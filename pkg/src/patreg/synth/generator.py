"""Seeded generation of schema-consistent register + core fixtures."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

from ..model import (
    SCHEMA_BY_ATTR, VALIDITY_CHALLENGE_CODES, Dataset, Table, as_column,
)
from .rng import Rng

# EPC member states, Autumn 2016.
EPC_STATES = (
    "AL", "AT", "BE", "BG", "CH", "CY", "CZ", "DE", "DK", "EE", "ES", "FI", "FR",
    "GB", "GR", "HR", "HU", "IE", "IS", "IT", "LI", "LT", "LU", "LV", "MC", "MK",
    "MT", "NL", "NO", "PL", "PT", "RO", "RS", "SE", "SI", "SK", "SM", "TR",
)

APPLICANT_NAMES = (
    "Vestas Wind Systems A/S", "Siemens Aktiengesellschaft", "General Electric Company",
    "Enercon GmbH", "Nordex Energy GmbH", "Gamesa Innovation & Technology S.L.",
    "Senvion SE", "Suzlon Energy Ltd", "LM Wind Power A/S", "Mitsubishi Heavy Industries, Ltd.",
    "Wobben Properties GmbH", "ABB Research Ltd", "Hansen Transmissions International",
    "Repower Systems AG", "Alstom Renewable Technologies", "Acciona Windpower S.A.",
    "Clipper Windpower, Inc.", "Siemens Gamesa Renewable Energy", "Areva Wind GmbH",
    "Moog Unna GmbH", "Schaeffler Technologies AG & Co. KG", "SKF AB",
    "Fuhrländer AG", "Kenersys GmbH", "Eickhoff Antriebstechnik GmbH",
)
AGENT_NAMES = (
    "Strehl Schübel-Hopf & Partner", "Helms, Joachim, Dipl.-Ing. Patentanwalt",
    "Dr. Weitzel & Partner", "Hilleringmann, Jochen, Dipl.-Ing., et al",
    "Zacco Denmark A/S", "Plougmann Vingtoft A/S", "Maiwald Patentanwalts GmbH",
    "Boult Wade Tennant", "Elzaburu S.L.P.", "Vossius & Partner",
    "Hoffmann Eitle", "Grünecker Patent- und Rechtsanwälte",
)
INVENTOR_NAMES = (
    "Olsen, Kim", "Jensen, Lars", "Müller, Anna", "García, Pedro", "Smith, John",
    "Nielsen, Birgit", "Schmidt, Peter", "Rossi, Marco", "Tanaka, Hiroshi", "Dubois, Claire",
)
IPC_WIND = ("F03D 1/06", "F03D 7/02", "F03D 7/04", "F03D 9/00", "F03D 11/00", "F03D 80/70")
IPC_OTHER = ("F03B 13/10", "F16C 19/38", "H02K 7/18", "H02P 9/00", "B64C 11/00", "F16H 1/28")
APPR_CODES = ("0009299APPR", "EPIDOSCAPPR", "EPIDOSNAPPR", "0009183APPR")
FILLER_EVENTS = ("0009012", "0009013", "0009015", "0009199EPPU", "EPIDOSNIGR1", "EPIDOSNRFE1")
STEP_CODES = ("PFEE", "LOPR", "RFEE", "EXAM", "ABEX", "IGRA", "RAPL", "PMAP", "DOBS", "ACOR")
OPPOSITION_CODES = ("0008299OPPO", "0009260")
REVOCATION_CODES = ("EPIDOSCRVR1", "EPIDOSCRVR6", "EPIDOSNRVR1", "EPIDOSNRVR6")
LIMITATION_CODES = ("EPIDOSCLIM1", "EPIDOSNLIM1")
PRS_OTHER = ("PG25", "REG", "26N", "REF")
STATUSES = ("Examination is in progress", "The patent has been granted",
            "The application is deemed to be withdrawn", "Patent revoked",
            "The international publication has been made")

# Identifier ranges; scenario fixtures use smaller numbers, so they never collide.
REGISTER_ID_BASE = 50_000_000
APPLN_ID_BASE = 500_000_000
CORE_ONLY_BASE = 900_000_000
PUBLN_ID_BASE = 1_000_000_000

assert not (set(OPPOSITION_CODES + REVOCATION_CODES + LIMITATION_CODES) - VALIDITY_CHALLENGE_CODES)


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    n_applications: int = 100
    year_from: int = 1996
    year_to: int = 2014
    p_not_entered: float = 0.30     # Euro-PCT never entering the EP phase: appln_id = 0
    p_wind: float = 0.5             # share tagged with an F03D symbol
    p_core_only: float = 0.10       # extra core applications with no register row, per application
    p_citations: float = 0.8
    p_license: float = 0.05
    p_transfer: float = 0.25
    p_grant: float = 0.55
    p_opposition: float = 0.10
    p_limitation: float = 0.03
    p_pgfp: float = 0.9
    p_duplicate_pgfp: float = 0.10
    p_representative: float = 0.92
    states: tuple[str, ...] = field(default=EPC_STATES)

    def __post_init__(self):
        for name in ("p_not_entered", "p_wind", "p_core_only", "p_citations", "p_license",
                     "p_transfer", "p_grant", "p_opposition", "p_limitation", "p_pgfp",
                     "p_duplicate_pgfp", "p_representative"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be within [0, 1], got {p}")
        if self.n_applications < 0:
            raise ValueError("n_applications must be >= 0")
        if not self.states or len(self.states) > len(EPC_STATES):
            raise ValueError(f"states must hold 1..{len(EPC_STATES)} codes")
        if self.year_from > self.year_to:
            raise ValueError("year_from must not exceed year_to")


def bulletin_of(day: dt.date) -> tuple[int, int]:
    """Bulletin (year, week) in which a given day falls."""
    y, w, _ = day.isocalendar()
    return y, w


class _Columns:
    """Append-only column lists for one relation."""

    def __init__(self, attr: str):
        self.schema = SCHEMA_BY_ATTR[attr]
        self.cols: dict[str, list] = {c.name: [] for c in self.schema.columns}
        self._order = [c.name for c in self.schema.columns]

    def add(self, *values) -> None:
        for name, v in zip(self._order, values):
            self.cols[name].append(v)

    def table(self) -> Table:
        return Table(self.schema, {c.name: as_column(self.cols[c.name], c.kind) for c in self.schema.columns})


class _Builder:
    def __init__(self, cfg: GeneratorConfig):
        self.cfg = cfg
        self.rng = Rng(cfg.seed)
        self.t = {attr: _Columns(attr) for attr in SCHEMA_BY_ATTR}
        self.next_publn = PUBLN_ID_BASE
        self.cust_of = {n: f"C{k:05d}" for k, n in enumerate(APPLICANT_NAMES)}
        self.lo = dt.date(cfg.year_from, 1, 1).toordinal()
        self.hi = dt.date(cfg.year_to, 12, 31).toordinal()

    def day(self, base: dt.date, lo: int, hi: int) -> dt.date:
        return base + dt.timedelta(days=self.rng.between(lo, hi))

    def publn_id(self) -> int:
        self.next_publn += 1 + self.rng.below(3)
        return self.next_publn

    def core(self, appln_id: int, auth: str, kind: str, filed: dt.date, wind: bool) -> None:
        r, t = self.rng, self.t
        t["core_applications"].add(appln_id, auth, kind, filed)
        symbols = r.sample(IPC_OTHER, r.between(0 if wind else 1, 2))
        if wind:
            symbols += r.sample(IPC_WIND, r.between(1, 2))
        if r.chance(0.05):
            symbols.append(symbols[0])  # duplicate IPC rows occur in real extracts
        for s in symbols:
            t["ipc"].add(appln_id, s)
        for _ in range(r.between(1, 3)):
            pid = self.publn_id()
            t["core_publications"].add(pid, appln_id)
            if not r.chance(self.cfg.p_citations):
                continue
            seq = 0
            for _ in range(r.between(0, 12)):
                seq += 1
                cited = r.between(1, 400_000) if r.chance(0.9) else max(PUBLN_ID_BASE + 1, pid - r.between(1, 50))
                t["citations"].add(pid, cited, seq)
            for _ in range(r.below(3)):
                if r.chance(0.3):
                    t["citations"].add(pid, r.between(1, 400_000), 0)

    def application(self, i: int) -> None:
        cfg, r, t = self.cfg, self.rng, self.t
        rid = REGISTER_ID_BASE + 7 * i + r.below(7)
        filed = dt.date.fromordinal(r.between(self.lo, self.hi))
        entered = not r.chance(cfg.p_not_entered)
        appln_id = APPLN_ID_BASE + 11 * i + r.below(11) if entered else 0
        granted = entered and r.chance(cfg.p_grant)
        t["applications"].add(rid, appln_id, filed, r.choice(STATUSES))
        if entered:
            self.core(appln_id, "EP", "A" if r.chance(0.8) else "W", filed, r.chance(cfg.p_wind))

        # publications: A document, then B documents only for granted lifecycles
        a_date = self.day(filed, 90, 600)
        first_bulletin = bulletin_of(a_date)
        t["publications"].add(rid, "A1" if r.chance(0.7) else "A2", *first_bulletin)
        if r.chance(0.15):
            t["publications"].add(rid, "A3", *bulletin_of(self.day(a_date, 30, 400)))

        exam = None
        if r.chance(0.75):
            exam = self.day(filed, 0, 1200) if r.chance(0.97) else filed
            t["events"].add(rid, "0009185", exam)
            if r.chance(0.05):
                t["events"].add(rid, "0009185", self.day(exam, 1, 300))
        for _ in range(r.between(1, 4)):
            t["events"].add(rid, r.choice(FILLER_EVENTS), self.day(filed, 0, 2000))

        if granted:
            grant = self.day(exam or a_date, 200, 1500)
            t["publications"].add(rid, "B1", *bulletin_of(grant))
            if r.chance(cfg.p_opposition):
                for _ in range(r.between(1, 3)):
                    code = r.choice(OPPOSITION_CODES) if r.chance(0.8) else r.choice(REVOCATION_CODES)
                    t["events"].add(rid, code, self.day(grant, 20, 270))
                if r.chance(0.5):
                    t["publications"].add(rid, "B2", *bulletin_of(self.day(grant, 400, 1500)))
            if r.chance(cfg.p_limitation):
                t["events"].add(rid, r.choice(LIMITATION_CODES), self.day(grant, 100, 2000))
                t["publications"].add(rid, "B3", *bulletin_of(self.day(grant, 500, 2500)))

        self.parties(rid, a_date, first_bulletin)
        self.states_and_licences(rid, a_date)
        for _ in range(r.between(0, 15)):
            t["proc_steps"].add(rid, r.choice(STEP_CODES))
        if granted:
            self.legal_status(appln_id, grant)

    def parties(self, rid: int, a_date: dt.date, first_bulletin: tuple[int, int]) -> None:
        cfg, r, t = self.cfg, self.rng, self.t
        n_sets = 1 + (r.between(1, 5) if r.chance(cfg.p_transfer) else 0)
        names = r.sample(APPLICANT_NAMES, r.between(1, 3))
        when = a_date
        for s in range(1, n_sets + 1):
            bulletin = first_bulletin
            if s > 1:
                when = self.day(when, 60, 500)
                bulletin = bulletin_of(when)
                if r.chance(0.5):
                    names = r.sample(APPLICANT_NAMES, r.between(1, 3))
                if r.chance(0.6):
                    t["events"].add(rid, r.choice(APPR_CODES), when)
            for q, name in enumerate(names, start=1):
                cust = self.cust_of[name] if not r.chance(0.1) else f"C{r.between(90000, 99999)}"
                t["parties"].add(rid, "A", q, s, s == n_sets, name, cust, *bulletin)
        if r.chance(cfg.p_representative):
            agents = r.sample(AGENT_NAMES, 2 if r.chance(0.1) else 1)
            later = r.chance(0.1)
            for q, name in enumerate(agents, start=1):
                t["parties"].add(rid, "R", q, 1, not later, name, "", *first_bulletin)
            if later:
                t["parties"].add(rid, "R", 1, 2, True, r.choice(AGENT_NAMES), "",
                                 *bulletin_of(self.day(a_date, 100, 900)))
        for q, name in enumerate(r.sample(INVENTOR_NAMES, r.between(1, 3)), start=1):
            t["parties"].add(rid, "I", q, 1, True, name, "", *first_bulletin)

    def states_and_licences(self, rid: int, a_date: dt.date) -> None:
        cfg, r, t = self.cfg, self.rng, self.t
        for c in r.sample(cfg.states, r.between(1, min(12, len(cfg.states)))):
            t["designated_states"].add(rid, c)
        if not r.chance(cfg.p_license):
            return
        for seq in range(1, r.between(1, 3) + 1):
            everywhere = r.chance(0.25)
            t["licensees"].add(rid, seq, r.choice(("EXC", "NEX", "RIR")),
                               "all" if everywhere else "as-indicated")
            if everywhere:
                continue
            bulletin = bulletin_of(self.day(a_date, 100, 2000))
            for c in r.sample(cfg.states, r.between(1, len(cfg.states))):
                t["licensee_states"].add(rid, seq, c, *bulletin)

    def legal_status(self, appln_id: int, grant: dt.date) -> None:
        cfg, r, t = self.cfg, self.rng, self.t
        if r.chance(cfg.p_pgfp):
            for c in r.sample(cfg.states, r.between(1, min(20, len(cfg.states)))):
                year = grant.year + r.between(1, 8)
                t["legal_status"].add(appln_id, "PGFP", c, year)
                if r.chance(cfg.p_duplicate_pgfp):
                    t["legal_status"].add(appln_id, "PGFP", c, year - 1)
        for _ in range(r.below(3)):
            code = r.choice(PRS_OTHER)
            t["legal_status"].add(appln_id, code, r.choice(cfg.states) if code == "PG25" else "", None)

    def core_only(self, j: int) -> None:
        r = self.rng
        filed = dt.date.fromordinal(r.between(self.lo, self.hi))
        auth = "EP" if r.chance(0.5) else r.choice(("US", "DE", "JP", "CN"))
        self.core(CORE_ONLY_BASE + j, auth, "A", filed, r.chance(self.cfg.p_wind))

    def build(self) -> Dataset:
        for i in range(self.cfg.n_applications):
            self.application(i)
            if self.rng.chance(self.cfg.p_core_only):
                self.core_only(i)
        return Dataset(**{attr: cols.table() for attr, cols in self.t.items()})


def generate_fixture(config: GeneratorConfig | None = None, **overrides) -> Dataset:
    """Build a fixture; a pure function of the config."""
    if config is None:
        config = GeneratorConfig(**overrides)
    elif overrides:
        config = GeneratorConfig(**{**config.__dict__, **overrides})
    return _Builder(config).build()
