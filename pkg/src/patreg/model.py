"""Domain types for register and core patent tables.

Relations are held column-wise (one numpy array per column) so the indexed
store can work on whole columns. Each relation also has a frozen row type;
``Table.rows()`` materialises those for code that wants plain records.
"""

from __future__ import annotations

import datetime as dt
import enum
from dataclasses import dataclass, field, fields
from decimal import Decimal
from typing import Any, Iterator, NamedTuple

import numpy as np

# Column kinds. "opt_int" uses 0 as the in-memory absent marker.
INT, OPT_INT, STR, DATE, BOOL = "int", "opt_int", "str", "date", "bool"

MIN_BULLETIN_YEAR, MAX_BULLETIN_YEAR = 1978, 2100


class PartyType(str, enum.Enum):
    APPLICANT = "A"
    REPRESENTATIVE = "R"
    INVENTOR = "I"


class LicenseType(str, enum.Enum):
    EXC = "EXC"
    NEX = "NEX"
    RIR = "RIR"


class Designation(str, enum.Enum):
    ALL = "all"
    AS_INDICATED = "as-indicated"


class ValidationMode(str, enum.Enum):
    STRICT = "strict"
    LENIENT = "lenient"


# ---------------------------------------------------------------- row types


@dataclass(frozen=True, slots=True)
class RegisterApplication:
    id: int
    appln_id: int
    appln_filing_date: dt.date
    status: str = ""


@dataclass(frozen=True, slots=True)
class CoreApplication:
    appln_id: int
    appln_auth: str
    appln_kind: str
    appln_filing_date: dt.date


@dataclass(frozen=True, slots=True)
class IpcAssignment:
    appln_id: int
    ipc_class_symbol: str


@dataclass(frozen=True, slots=True)
class CorePublication:
    pat_publn_id: int
    appln_id: int


@dataclass(frozen=True, slots=True)
class Citation:
    pat_publn_id: int
    cited_pat_publn_id: int
    pat_citn_seq_nr: int


@dataclass(frozen=True, slots=True)
class RegisterPublication:
    id: int
    publn_kind: str
    bulletin_year: int
    bulletin_nr: int


@dataclass(frozen=True, slots=True)
class Party:
    id: int
    type: PartyType
    seq_nr: int
    set_seq_nr: int
    is_latest: bool
    name: str
    customer_id: str
    bulletin_year: int
    bulletin_nr: int


@dataclass(frozen=True, slots=True)
class DesignatedState:
    id: int
    country: str


@dataclass(frozen=True, slots=True)
class Licensee:
    id: int
    licensee_seq_nr: int
    type_license: LicenseType
    designation: Designation


@dataclass(frozen=True, slots=True)
class LicenseeState:
    id: int
    licensee_seq_nr: int
    licensee_country: str
    bulletin_year: int
    bulletin_nr: int


@dataclass(frozen=True, slots=True)
class ProcedureStep:
    id: int
    step_code: str


@dataclass(frozen=True, slots=True)
class RegisterEvent:
    id: int
    event_code: str
    event_date: dt.date


@dataclass(frozen=True, slots=True)
class LegalStatusEvent:
    appln_id: int
    prs_code: str
    country: str = ""
    fee_payment_year: int | None = None


# ------------------------------------------------------------------ schemas


@dataclass(frozen=True)
class Column:
    name: str
    kind: str
    required: bool = True
    choices: tuple[str, ...] = ()
    aliases: tuple[str, ...] = ()


@dataclass(frozen=True)
class TableSchema:
    name: str
    attr: str
    row_type: type
    columns: tuple[Column, ...]
    unique: tuple[str, ...] = ()

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)


def _enum_values(e: type[enum.Enum]) -> tuple[str, ...]:
    return tuple(m.value for m in e)


_BULLETIN = (Column("bulletin_year", INT), Column("bulletin_nr", INT))

SCHEMAS: tuple[TableSchema, ...] = (
    TableSchema(
        "reg101_appln", "applications", RegisterApplication,
        (Column("id", INT), Column("appln_id", INT),
         Column("appln_filing_date", DATE), Column("status", STR, required=False)),
        unique=("id",),
    ),
    TableSchema(
        "reg102_pat_publn", "publications", RegisterPublication,
        (Column("id", INT), Column("publn_kind", STR)) + _BULLETIN,
    ),
    TableSchema(
        "reg107_parties", "parties", Party,
        (Column("id", INT), Column("type", STR, choices=_enum_values(PartyType)),
         Column("seq_nr", INT), Column("set_seq_nr", INT), Column("is_latest", BOOL),
         Column("name", STR, required=False), Column("customer_id", STR, required=False))
        + _BULLETIN,
        unique=("id", "type", "set_seq_nr", "seq_nr"),
    ),
    TableSchema(
        "reg109_design_states", "designated_states", DesignatedState,
        (Column("id", INT), Column("country", STR)),
    ),
    TableSchema(
        "reg111_licensee", "licensees", Licensee,
        (Column("id", INT), Column("licensee_seq_nr", INT),
         Column("type_license", STR, choices=_enum_values(LicenseType)),
         Column("designation", STR, choices=_enum_values(Designation))),
        unique=("id", "licensee_seq_nr"),
    ),
    TableSchema(
        "reg112_licensee_states", "licensee_states", LicenseeState,
        (Column("id", INT), Column("licensee_seq_nr", INT), Column("licensee_country", STR))
        + _BULLETIN,
        unique=("id", "licensee_seq_nr", "licensee_country"),
    ),
    TableSchema(
        "reg201_proc_step", "proc_steps", ProcedureStep,
        (Column("id", INT), Column("step_code", STR)),
    ),
    TableSchema(
        "reg301_event_data", "events", RegisterEvent,
        (Column("id", INT), Column("event_code", STR), Column("event_date", DATE)),
    ),
    TableSchema(
        "tls201_appln", "core_applications", CoreApplication,
        (Column("appln_id", INT), Column("appln_auth", STR), Column("appln_kind", STR),
         Column("appln_filing_date", DATE)),
        unique=("appln_id",),
    ),
    TableSchema(
        "tls209_appln_ipc", "ipc", IpcAssignment,
        (Column("appln_id", INT), Column("ipc_class_symbol", STR)),
    ),
    TableSchema(
        "tls211_pat_publn", "core_publications", CorePublication,
        (Column("pat_publn_id", INT), Column("appln_id", INT)),
        unique=("pat_publn_id",),
    ),
    TableSchema(
        "tls212_citation", "citations", Citation,
        (Column("pat_publn_id", INT), Column("cited_pat_publn_id", INT),
         Column("pat_citn_seq_nr", INT)),
    ),
    TableSchema(
        "tls221_inpadoc_prs", "legal_status", LegalStatusEvent,
        (Column("appln_id", INT), Column("prs_code", STR),
         Column("country", STR, required=False, aliases=("l501ep",)),
         Column("fee_payment_year", OPT_INT, required=False, aliases=("l520ep",))),
    ),
)

SCHEMA_BY_NAME = {s.name: s for s in SCHEMAS}
SCHEMA_BY_ATTR = {s.attr: s for s in SCHEMAS}


# -------------------------------------------------------------------- table


def _empty(kind: str) -> np.ndarray:
    return np.empty(0, dtype=_DTYPES[kind])


_DTYPES = {INT: np.int64, OPT_INT: np.int64, STR: object, DATE: "datetime64[D]", BOOL: bool}


def as_column(values: Any, kind: str) -> np.ndarray:
    """Coerce a sequence into the canonical array type for ``kind``."""
    if kind == STR:
        arr = np.empty(len(values), dtype=object)
        arr[:] = [("" if v is None else str(v)) for v in values]
        return arr
    if kind == OPT_INT:
        return np.array([0 if v is None else int(v) for v in values], dtype=np.int64)
    if kind == DATE:
        return np.array(values, dtype="datetime64[D]").reshape(-1)
    return np.asarray(values, dtype=_DTYPES[kind]).reshape(-1)


class Table:
    """One relation stored column-wise. Treat instances as immutable."""

    __slots__ = ("schema", "columns")

    def __init__(self, schema: TableSchema, columns: dict[str, np.ndarray] | None = None):
        self.schema = schema
        columns = columns or {}
        cols: dict[str, np.ndarray] = {}
        n = None
        for c in schema.columns:
            arr = columns.get(c.name)
            arr = _empty(c.kind) if arr is None else as_column(arr, c.kind) if not isinstance(arr, np.ndarray) else arr
            if n is None:
                n = len(arr)
            elif len(arr) != n:
                raise ValueError(f"{schema.name}: column {c.name} has {len(arr)} rows, expected {n}")
            arr.flags.writeable = False
            cols[c.name] = arr
        self.columns = cols

    @classmethod
    def empty(cls, schema: TableSchema) -> Table:
        return cls(schema)

    @classmethod
    def from_rows(cls, schema: TableSchema, rows: list) -> Table:
        cols = {}
        for c in schema.columns:
            vals = [getattr(r, c.name) for r in rows]
            if c.kind == STR:
                vals = [v.value if isinstance(v, enum.Enum) else v for v in vals]
            cols[c.name] = as_column(vals, c.kind)
        return cls(schema, cols)

    def __len__(self) -> int:
        return len(self.columns[self.schema.columns[0].name])

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Table) or other.schema is not self.schema or len(other) != len(self):
            return NotImplemented if not isinstance(other, Table) else False
        return all(np.array_equal(self.columns[k], other.columns[k]) for k in self.columns)

    def __repr__(self) -> str:
        return f"Table({self.schema.name}, {len(self)} rows)"

    def take(self, index: np.ndarray) -> Table:
        return Table(self.schema, {k: v[index] for k, v in self.columns.items()})

    def concat(self, other: Table) -> Table:
        return Table(self.schema, {k: np.concatenate([v, other.columns[k]]) for k, v in self.columns.items()})

    def rows(self) -> Iterator[Any]:
        rt = self.schema.row_type
        converters = []
        for c in self.schema.columns:
            ftype = _ROW_ENUMS.get((rt, c.name))
            converters.append((c.kind, ftype))
        lists = []
        for c, (kind, ftype) in zip(self.schema.columns, converters):
            vals = self.columns[c.name].tolist()
            if ftype is not None:
                vals = [ftype(v) for v in vals]
            elif kind == OPT_INT:
                vals = [v or None for v in vals]
            lists.append(vals)
        for values in zip(*lists):
            yield rt(*values)


_ROW_ENUMS = {
    (Party, "type"): PartyType,
    (Licensee, "type_license"): LicenseType,
    (Licensee, "designation"): Designation,
}


@dataclass(frozen=True, eq=True)
class Dataset:
    """All thirteen relations. Missing tables are empty."""

    applications: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["applications"]))
    publications: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["publications"]))
    parties: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["parties"]))
    designated_states: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["designated_states"]))
    licensees: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["licensees"]))
    licensee_states: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["licensee_states"]))
    proc_steps: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["proc_steps"]))
    events: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["events"]))
    core_applications: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["core_applications"]))
    ipc: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["ipc"]))
    core_publications: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["core_publications"]))
    citations: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["citations"]))
    legal_status: Table = field(default_factory=lambda: Table.empty(SCHEMA_BY_ATTR["legal_status"]))

    def tables(self) -> Iterator[Table]:
        for f in fields(self):
            yield getattr(self, f.name)

    @classmethod
    def from_rows(cls, **relations: list) -> Dataset:
        return cls(**{k: Table.from_rows(SCHEMA_BY_ATTR[k], list(v)) for k, v in relations.items()})

    def replace(self, **tables: Table) -> Dataset:
        current = {f.name: getattr(self, f.name) for f in fields(self)}
        current.update(tables)
        return Dataset(**current)

    def concat(self, other: Dataset) -> Dataset:
        return Dataset(**{f.name: getattr(self, f.name).concat(getattr(other, f.name)) for f in fields(self)})

    def summary(self) -> dict[str, int]:
        return {t.schema.name: len(t) for t in self.tables()}


# --------------------------------------------------------------- validation


class Violation(NamedTuple):
    table: str
    row: int  # 1-based data record number; 0 when not row-specific
    kind: str
    message: str


def _country_ok(col: np.ndarray, allow_empty: bool = False) -> np.ndarray:
    if len(col) == 0:
        return np.zeros(0, dtype=bool)
    u = np.asarray(col, dtype=str)
    lengths = np.char.str_len(u)
    if u.dtype.itemsize < 8:  # every value shorter than two characters
        ok = np.zeros(len(u), dtype=bool)
    else:
        cp = u.view(np.uint32).reshape(len(u), -1)[:, :2]
        ok = (lengths == 2) & ((cp >= ord("A")) & (cp <= ord("Z"))).all(axis=1)
    if allow_empty:
        ok |= lengths == 0
    return ok


def encode_country(col: np.ndarray) -> np.ndarray:
    """Map 2-letter codes (or "") to distinct uint64 keys."""
    return np.asarray(col, dtype="U2").view(np.uint64).reshape(-1) if len(col) else np.empty(0, np.uint64)


def factorize(col: np.ndarray) -> tuple[np.ndarray, list]:
    """Integer codes in first-seen order for an object column."""
    seen: dict = {}
    codes = np.fromiter((seen.setdefault(v, len(seen)) for v in col.tolist()), dtype=np.int64, count=len(col))
    return codes, list(seen)


def duplicate_mask(columns: list[np.ndarray]) -> np.ndarray:
    """True on every row whose key already occurred earlier in row order."""
    n = len(columns[0]) if columns else 0
    if n == 0:
        return np.zeros(0, dtype=bool)
    keys = [factorize(c)[0] if c.dtype == object else c.astype(np.int64) for c in columns]
    order = np.lexsort([np.arange(n)] + keys[::-1])
    same = np.ones(n - 1, dtype=bool)
    for k in keys:
        ks = k[order]
        same &= ks[1:] == ks[:-1]
    dup = np.zeros(n, dtype=bool)
    dup[order[1:][same]] = True
    return dup


def _range(col: np.ndarray, lo: int | None = None, hi: int | None = None) -> np.ndarray:
    bad = np.zeros(len(col), dtype=bool)
    if lo is not None:
        bad |= col < lo
    if hi is not None:
        bad |= col > hi
    return bad


def _bulletin_checks(t: Table) -> list[tuple[np.ndarray, str, str]]:
    return [
        (_range(t["bulletin_year"], MIN_BULLETIN_YEAR, MAX_BULLETIN_YEAR), "out_of_range",
         f"bulletin_year outside [{MIN_BULLETIN_YEAR}, {MAX_BULLETIN_YEAR}]"),
        (_range(t["bulletin_nr"], 1, 53), "out_of_range", "bulletin_nr outside [1, 53]"),
    ]


def _nonempty(col: np.ndarray) -> np.ndarray:
    return np.asarray(col == "", dtype=bool)


def row_checks(table: Table) -> list[tuple[np.ndarray, str, str]]:
    """Per-row invariant checks as (bad_mask, kind, message) triples."""
    s = table.schema
    t = table
    checks: list[tuple[np.ndarray, str, str]] = []
    for c in s.columns:
        if c.choices:
            allowed = set(c.choices)
            bad = ~np.isin(t[c.name], np.array(sorted(allowed), dtype=object))
            checks.append((bad, "invalid_value", f"{c.name} not in {sorted(allowed)}"))
        elif c.kind == STR and c.required:
            checks.append((_nonempty(t[c.name]), "missing_value", f"{c.name} is empty"))
    name = s.name
    if name == "reg101_appln":
        checks.append((_range(t["id"], 1), "out_of_range", "id must be positive"))
        checks.append((_range(t["appln_id"], 0), "out_of_range", "appln_id must be non-negative"))
    elif name == "tls201_appln":
        checks.append((_range(t["appln_id"], 1), "out_of_range", "appln_id must be positive"))
    elif name == "tls211_pat_publn":
        checks.append((_range(t["pat_publn_id"], 1), "out_of_range", "pat_publn_id must be positive"))
    elif name == "tls212_citation":
        checks.append((_range(t["pat_citn_seq_nr"], 0), "out_of_range", "pat_citn_seq_nr must be >= 0"))
    elif name == "reg102_pat_publn":
        checks.extend(_bulletin_checks(t))
    elif name == "reg107_parties":
        checks.append((_range(t["seq_nr"], 1), "out_of_range", "seq_nr must be >= 1"))
        checks.append((_range(t["set_seq_nr"], 1), "out_of_range", "set_seq_nr must be >= 1"))
        checks.extend(_bulletin_checks(t))
    elif name == "reg111_licensee":
        checks.append((_range(t["licensee_seq_nr"], 1), "out_of_range", "licensee_seq_nr must be >= 1"))
    elif name == "reg112_licensee_states":
        checks.append((~_country_ok(t["licensee_country"]), "invalid_value", "licensee_country must be 2 uppercase letters"))
        checks.extend(_bulletin_checks(t))
    elif name == "reg109_design_states":
        checks.append((~_country_ok(t["country"]), "invalid_value", "country must be 2 uppercase letters"))
    elif name == "tls221_inpadoc_prs":
        pgfp = t["prs_code"] == "PGFP"
        empty_country = t["country"] == ""
        checks.append((pgfp & empty_country, "missing_value", "PGFP row without country"))
        checks.append((~_country_ok(t["country"], allow_empty=True), "invalid_value", "country must be 2 uppercase letters"))
        fy = t["fee_payment_year"]
        checks.append(((fy != 0) & _range(fy, MIN_BULLETIN_YEAR, MAX_BULLETIN_YEAR), "out_of_range",
                       "fee_payment_year out of range"))
    if s.unique:
        key = [t[k] for k in s.unique]
        if name == "reg101_appln":
            checks.append((duplicate_mask(key), "duplicate_key", "duplicate id"))
            linked = t["appln_id"] > 0
            dup = np.zeros(len(t), dtype=bool)
            dup[linked] = duplicate_mask([t["appln_id"][linked]])
            checks.append((dup, "duplicate_key", "duplicate non-zero appln_id"))
        else:
            checks.append((duplicate_mask(key), "duplicate_key", f"duplicate key ({', '.join(s.unique)})"))
    return checks


def table_violations(table: Table) -> tuple[np.ndarray, list[Violation]]:
    """Return (bad row mask, violations) for one table. One violation per failing check per row."""
    bad = np.zeros(len(table), dtype=bool)
    out: list[Violation] = []
    for mask, kind, msg in row_checks(table):
        for i in np.flatnonzero(mask):
            out.append(Violation(table.schema.name, int(i) + 1, kind, msg))
        bad |= mask
    out.sort(key=lambda v: v.row)
    return bad, out


def latest_flag_warnings(parties: Table) -> list[Violation]:
    """Rows whose is_latest disagrees with the maximal set_seq_nr of their (id, type)."""
    n = len(parties)
    if n == 0:
        return []
    ids = parties["id"]
    tcode, _ = factorize(parties["type"])
    sets = parties["set_seq_nr"]
    order = np.lexsort((sets, tcode, ids))
    gid, gt = ids[order], tcode[order]
    boundary = np.ones(n, dtype=bool)
    boundary[:-1] = (gid[1:] != gid[:-1]) | (gt[1:] != gt[:-1])
    # boundary marks last row of each group; broadcast its set number back
    last_pos = np.flatnonzero(boundary)
    group_of = np.searchsorted(last_pos, np.arange(n))
    max_set = np.empty(n, dtype=np.int64)
    max_set[order] = sets[order][last_pos][group_of]
    expected = sets == max_set
    wrong = np.flatnonzero(expected != parties["is_latest"])
    return [Violation("reg107_parties", int(i) + 1, "is_latest_inconsistent",
                      "is_latest disagrees with maximal set_seq_nr") for i in wrong]


def check_dataset(dataset: Dataset) -> tuple[list[Violation], list[Violation]]:
    """Every type-invariant violation, plus warn-only findings."""
    violations: list[Violation] = []
    for t in dataset.tables():
        violations.extend(table_violations(t)[1])
    return violations, latest_flag_warnings(dataset.parties)


# ------------------------------------------------------- indicator vocabulary


class IndicatorKind(str, enum.Enum):
    COHORT = "cohort"
    BACKWARD_CITATIONS = "backward_citations"
    LICENSE_COUNTRIES = "license_countries"
    APPLICANT_SETS = "applicant_sets"
    TRANSFER_SIGNALS = "transfer_signals"
    DAYS_TO_EXAM = "days_to_exam"
    FIRST_REPRESENTATIVE = "first_representative"
    VALIDITY_CHALLENGES = "validity_challenges"
    AMENDMENT_KINDS = "amendment_kinds"
    VALIDATED_STATES = "validated_states"
    AVG_PROC_STEPS = "avg_proc_steps"


# The eight reference indicators plus cohort selection.
REFERENCE_KINDS = (
    IndicatorKind.COHORT,
    IndicatorKind.BACKWARD_CITATIONS,
    IndicatorKind.LICENSE_COUNTRIES,
    IndicatorKind.APPLICANT_SETS,
    IndicatorKind.DAYS_TO_EXAM,
    IndicatorKind.FIRST_REPRESENTATIVE,
    IndicatorKind.VALIDITY_CHALLENGES,
    IndicatorKind.VALIDATED_STATES,
    IndicatorKind.AVG_PROC_STEPS,
)
AUXILIARY_KINDS = (IndicatorKind.TRANSFER_SIGNALS, IndicatorKind.AMENDMENT_KINDS)


class OutputMode(str, enum.Enum):
    DEFAULT = "default"
    PAPER_COMPAT = "paper-compat"


class BulletinOrder(str, enum.Enum):
    NUMERIC = "numeric"
    PAPER_COMPAT = "paper-compat"


class StepMode(str, enum.Enum):
    PAPER_FAITHFUL = "paper-faithful"
    NORMALIZED = "normalized"


EXAM_EVENT_CODE = "0009185"
VALIDITY_CHALLENGE_CODES = frozenset({
    "0008299OPPO", "0009260", "EPIDOSCLIM1", "EPIDOSCRVR1",
    "EPIDOSCRVR6", "EPIDOSNLIM1", "EPIDOSNRVR1", "EPIDOSNRVR6",
})
AMENDMENT_KINDS = ("B2", "B3")
PGFP = "PGFP"
APPR_SUFFIX = "APPR"


@dataclass(frozen=True)
class CohortSpec:
    authority: str = "EP"
    kinds: frozenset[str] = frozenset({"A", "W"})
    year_from: int = 2000
    year_to: int = 2010
    ipc_prefix: str = "F03D"

    def __post_init__(self):
        if self.year_from > self.year_to:
            raise ValueError("year_from must not exceed year_to")
        if not self.ipc_prefix:
            raise ValueError("ipc_prefix must be non-empty")
        object.__setattr__(self, "kinds", frozenset(self.kinds))


@dataclass(frozen=True)
class Cohort:
    """Cohort members ascending by appln_id; ``ids`` holds the register id or 0."""

    appln_ids: tuple[int, ...]
    ids: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.appln_ids)

    @property
    def skipped(self) -> tuple[int, ...]:
        return tuple(a for a, i in zip(self.appln_ids, self.ids) if i == 0)


@dataclass(frozen=True)
class ApprRule:
    """Which event codes count as applicant-change events: an explicit list or a suffix."""

    suffix: str = APPR_SUFFIX
    codes: frozenset[str] | None = None

    def matches(self, code: str) -> bool:
        if self.codes is not None:
            return code in self.codes
        return code.endswith(self.suffix)


@dataclass(frozen=True)
class Params:
    cohort: CohortSpec = CohortSpec()
    mode: OutputMode = OutputMode.DEFAULT
    ordering: BulletinOrder = BulletinOrder.NUMERIC
    step_mode: StepMode = StepMode.NORMALIZED
    challenge_codes: frozenset[str] = VALIDITY_CHALLENGE_CODES
    appr: ApprRule = ApprRule()

    @classmethod
    def paper_compat(cls, **kw) -> Params:
        kw.setdefault("mode", OutputMode.PAPER_COMPAT)
        kw.setdefault("ordering", BulletinOrder.PAPER_COMPAT)
        kw.setdefault("step_mode", StepMode.PAPER_FAITHFUL)
        return cls(**kw)


class LicenseCoverage(NamedTuple):
    nb_lic_ctry: int
    has_all_designation: bool


class TransferSignals(NamedTuple):
    n_applicant_sets: int
    n_distinct_customer_ids: int
    n_appr_events: int


class ExamLag(NamedTuple):
    days_to_exam: int
    appln_filing_date: dt.date
    exam_date: dt.date


class FirstAgent(NamedTuple):
    bulletin_year: int
    bulletin_nr: int
    names: tuple[str, ...]


class IndicatorRow(NamedTuple):
    id: int
    appln_id: int
    value: Any


class ApplicantSteps(NamedTuple):
    name: str
    avg_proc_steps: Decimal


@dataclass(frozen=True)
class IndicatorResult:
    kind: IndicatorKind
    rows: tuple
    skipped: tuple[int, ...] = ()
    warnings: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.rows)

    def values(self) -> dict[int, Any]:
        return {r.id: r.value for r in self.rows}
