"""Read and write table dumps.

File format: one ``<table>.csv`` per relation, UTF-8, comma-delimited,
RFC-4180 quoting, header row of column names (matched case-insensitively,
any order, unknown columns ignored), empty field = absent, dates as
YYYY-MM-DD, booleans as Y/N. The writer's output is canonical: schema
column order, ``\\n`` line endings, minimal quoting.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import itertools
import os
import re
import tempfile
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pyarrow as pa
import pyarrow.compute as pc
import pyarrow.csv as pa_csv

from .model import (
    BOOL, DATE, INT, OPT_INT, SCHEMAS, STR, Dataset, Table, TableSchema, ValidationMode,
    Violation, latest_flag_warnings, table_violations,
)
from .output import write_csv

_INT_RE = re.compile(r"\s*[-+]?[0-9]+\s*")
_DATE_RE = re.compile(r"[0-9]{4}-[0-9]{2}-[0-9]{2}")
_TRUE, _FALSE = frozenset({"Y", "y"}), frozenset({"N", "n"})


class IngestError(Exception):
    """Fatal ingest problem. ``row`` is the 1-based data record number, 0 for file-level errors."""

    def __init__(self, table: str, row: int, kind: str, message: str):
        self.table, self.row, self.kind = table, row, kind
        where = f"{table} row {row}" if row else table
        super().__init__(f"{where}: {kind}: {message}")


@dataclass(frozen=True)
class DatasetManifest:
    directory: Path
    files: dict[str, str] = field(default_factory=dict)
    mode: ValidationMode = ValidationMode.STRICT
    null_date_sentinels: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "directory", Path(self.directory))
        object.__setattr__(self, "mode", ValidationMode(self.mode))
        unknown = set(self.files) - {s.name for s in SCHEMAS}
        if unknown:
            raise ValueError(f"unknown tables in manifest: {sorted(unknown)}")

    def path_for(self, table: str) -> Path:
        return self.directory / self.files.get(table, f"{table}.csv")


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[Violation] = field(default_factory=list)
    rows_in: dict[str, int] = field(default_factory=dict)
    rows_loaded: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.violations)

    @property
    def clean(self) -> bool:
        return not self.violations

    def counts(self) -> Counter:
        return Counter(v.kind for v in self.violations)

    def counts_by_table(self) -> Counter:
        return Counter(v.table for v in self.violations)

    def rows_dropped(self, table: str) -> int:
        return self.rows_in.get(table, 0) - self.rows_loaded.get(table, 0)

    def extend(self, other: ValidationReport) -> None:
        self.violations.extend(other.violations)
        self.warnings.extend(other.warnings)

    def render(self) -> str:
        lines = [f"{len(self.violations)} violations"]
        for kind, n in sorted(self.counts().items()):
            lines.append(f"  {kind}: {n}")
        for v in self.violations:
            lines.append(f"{v.table}\t{v.row}\t{v.kind}\t{v.message}")
        if self.warnings:
            lines.append(f"{len(self.warnings)} warnings")
            for v in self.warnings:
                lines.append(f"{v.table}\t{v.row}\t{v.kind}\t{v.message}")
        return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ parsing


def _parse_ints(values: list[str], required: bool) -> tuple[np.ndarray, dict[int, str]]:
    """Returns (int64 array, {index: problem}). Absent optional values become 0."""
    bad: dict[int, str] = {}
    arr = np.array(values, dtype=str) if values else np.empty(0, dtype=str)
    try:
        out = arr.astype(np.int64)
        if np.array_equal(out.astype(str), arr):
            return out, bad
    except (ValueError, OverflowError):
        pass
    out = np.zeros(len(values), dtype=np.int64)
    for i, s in enumerate(values):
        if s == "":
            if required:
                bad[i] = "missing_value"
        elif _INT_RE.fullmatch(s):
            try:
                v = int(s)
            except ValueError:
                bad[i] = "malformed_int"
                continue
            if -(2**63) <= v < 2**63:
                out[i] = v
            else:
                bad[i] = "malformed_int"
        else:
            bad[i] = "malformed_int"
    return out, bad


def _parse_dates(values: list[str], sentinels: tuple[str, ...]) -> tuple[np.ndarray, dict[int, str]]:
    bad: dict[int, str] = {}
    if sentinels:
        values = ["" if v in sentinels else v for v in values]
    arr = np.array(values, dtype=str) if values else np.empty(0, dtype=str)
    try:
        out = arr.astype("datetime64[D]")
        if np.array_equal(np.datetime_as_string(out, unit="D"), arr):
            return out, bad
    except ValueError:
        pass
    out = np.zeros(len(values), dtype="datetime64[D]")
    for i, s in enumerate(values):
        if s == "":
            bad[i] = "missing_value"
            continue
        try:
            if not _DATE_RE.fullmatch(s):
                raise ValueError(s)
            out[i] = dt.date.fromisoformat(s)
        except ValueError:
            bad[i] = "malformed_date"
    return out, bad


def _parse_bools(values: list[str]) -> tuple[np.ndarray, dict[int, str]]:
    bad = {i: ("missing_value" if s == "" else "malformed_bool")
           for i, s in enumerate(values) if s not in _TRUE and s not in _FALSE}
    return np.fromiter((s in _TRUE for s in values), dtype=bool, count=len(values)), bad


def _fail_or_record(mode, report, table, row, kind, message):
    if mode is ValidationMode.STRICT:
        raise IngestError(table, row, kind, message)
    report.violations.append(Violation(table, row, kind, message))


def _decode(raw: bytes, name: str, mode, report) -> str:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        _fail_or_record(mode, report, name, 0, "encoding", str(exc))
        text = raw.decode("utf-8", errors="replace")
    if "\x00" in text:
        _fail_or_record(mode, report, name, 0, "nul_byte", "NUL characters removed")
        text = text.replace("\x00", "")
    return text.removeprefix("\ufeff")


def _arrow_columns(raw: bytes, header: list[str]):
    """Whole-file parse with pyarrow; None when the file needs the row-by-row reader."""
    if len(set(header)) != len(header):
        return None
    try:
        table = pa_csv.read_csv(
            io.BytesIO(raw),
            parse_options=pa_csv.ParseOptions(newlines_in_values=True),
            convert_options=pa_csv.ConvertOptions(
                column_types={h: pa.string() for h in header},
                strings_can_be_null=False, quoted_strings_can_be_null=False,
            ),
        )
    except (pa.ArrowInvalid, pa.ArrowTypeError):
        return None
    if table.column_names != header:
        return None
    return [table.column(i) for i in range(len(header))], table.num_rows


def _strings(values) -> np.ndarray:
    if isinstance(values, pa.ChunkedArray):
        return values.to_numpy(zero_copy_only=False).astype(object, copy=False)
    arr = np.empty(len(values), dtype=object)
    arr[:] = values
    return arr


def _convert(kind: str, values, sentinels: tuple[str, ...]) -> tuple[np.ndarray, dict[int, str], list]:
    """Typed column plus per-index problems. ``values`` is an arrow column or a list of str."""
    if isinstance(values, pa.ChunkedArray):
        target = {INT: pa.int64(), OPT_INT: pa.int64(), DATE: pa.date32()}.get(kind)
        if target is not None and not (kind == DATE and sentinels):
            src = pc.if_else(pc.equal(values, ""), "0", values) if kind == OPT_INT else values
            try:
                return pc.cast(src, target).to_numpy(zero_copy_only=False).astype(_NP[kind], copy=False), {}, []
            except (pa.ArrowInvalid, pa.ArrowNotImplementedError):
                pass
        values = values.to_pylist()
    if kind in (INT, OPT_INT):
        arr, bad = _parse_ints(values, required=kind == INT)
    elif kind == DATE:
        arr, bad = _parse_dates(values, sentinels)
    elif kind == BOOL:
        arr, bad = _parse_bools(values)
    else:  # pragma: no cover
        raise AssertionError(kind)
    return arr, bad, values


_NP = {INT: np.int64, OPT_INT: np.int64, DATE: "datetime64[D]"}


def read_table(schema: TableSchema, path: Path, mode: ValidationMode, report: ValidationReport,
               null_date_sentinels: tuple[str, ...] = ()) -> Table:
    name = schema.name
    if not path.exists():
        report.rows_in[name] = report.rows_loaded[name] = 0
        return Table.empty(schema)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise IngestError(name, 0, "unreadable_file", f"{path}: {exc}") from exc
    text = _decode(raw, name, mode, report)
    try:
        header = next(csv.reader(io.StringIO(text, newline="")), None)
    except csv.Error as exc:
        raise IngestError(name, 0, "malformed_header", f"{path}: {exc}") from exc
    if header is None:
        raise IngestError(name, 0, "malformed_header", f"{path} is empty")
    lowered = [h.strip().lower() for h in header]
    positions: dict[str, int | None] = {}
    for col in schema.columns:
        pos = next((lowered.index(n) for n in (col.name,) + col.aliases if n in lowered), None)
        if pos is None and col.required:
            raise IngestError(name, 0, "malformed_header", f"missing column {col.name!r}")
        positions[col.name] = pos

    # arrow parses the bytes itself, so it only sees files that decoded cleanly
    body = raw.removeprefix(b"\xef\xbb\xbf")
    fast = _arrow_columns(body, header) if text.encode("utf-8") == body else None
    if fast is not None:
        raw_cols, n_records = fast
        report.rows_in[name] = n_records
        keep_rows = np.arange(n_records, dtype=np.int64)
    else:
        try:
            records = [r for r in csv.reader(io.StringIO(text, newline="")) if r][1:]
        except csv.Error as exc:
            raise IngestError(name, 0, "unreadable_file", f"{path}: {exc}") from exc
        width = len(header)
        report.rows_in[name] = len(records)
        rows_ok = []
        for i, rec in enumerate(records):
            if len(rec) != width:
                _fail_or_record(mode, report, name, i + 1, "field_count",
                                f"expected {width} fields, found {len(rec)}")
            else:
                rows_ok.append(i)
        keep_rows = np.asarray(rows_ok, dtype=np.int64)
        good = [records[i] for i in rows_ok]
        raw_cols = [[r[j] for r in good] for j in range(width)]
        n_records = len(good)

    columns: dict[str, np.ndarray] = {}
    problems: dict[int, tuple[str, str]] = {}
    for col in schema.columns:
        pos = positions[col.name]
        values = raw_cols[pos] if pos is not None else [""] * n_records
        if col.kind == STR:
            columns[col.name] = _strings(values)
            continue
        arr, bad, plain = _convert(col.kind, values, null_date_sentinels)
        columns[col.name] = arr
        for i, kind in bad.items():
            problems.setdefault(i, (kind, f"{col.name}={plain[i]!r}"))
    for i in sorted(problems):
        kind, msg = problems[i]
        _fail_or_record(mode, report, name, int(keep_rows[i]) + 1, kind, msg)

    ok = np.ones(n_records, dtype=bool)
    if problems:
        ok[list(problems)] = False
        columns = {k: v[ok] for k, v in columns.items()}
    table = Table(schema, columns)
    record_no = keep_rows[ok] + 1

    bad_mask, violations = table_violations(table)
    for v in violations:
        _fail_or_record(mode, report, name, int(record_no[v.row - 1]), v.kind, v.message)
    if bad_mask.any():
        table = table.take(~bad_mask)
    report.rows_loaded[name] = len(table)
    return table


def load_dataset(manifest: DatasetManifest | str | os.PathLike,
                 mode: ValidationMode | str | None = None) -> tuple[Dataset, ValidationReport]:
    """Load every table named in ``manifest`` (a directory path is accepted too)."""
    if not isinstance(manifest, DatasetManifest):
        manifest = DatasetManifest(Path(manifest), mode=mode or ValidationMode.STRICT)
    elif mode is not None:
        manifest = DatasetManifest(manifest.directory, manifest.files, ValidationMode(mode),
                                   manifest.null_date_sentinels)
    if not manifest.directory.is_dir():
        raise FileNotFoundError(f"dataset directory not found: {manifest.directory}")
    report = ValidationReport()
    tables = {}
    for schema in SCHEMAS:
        tables[schema.attr] = read_table(schema, manifest.path_for(schema.name), manifest.mode,
                                         report, manifest.null_date_sentinels)
    dataset = Dataset(**tables)
    report.warnings.extend(latest_flag_warnings(dataset.parties))
    return dataset, report


# --------------------------------------------------------- referential links


def _orphans(table: Table, column: str, parents: np.ndarray, what: str) -> list[Violation]:
    missing = ~np.isin(table[column], parents)
    return [Violation(table.schema.name, int(i) + 1, "orphan", f"{column}={table[column][i]} has no {what}")
            for i in np.flatnonzero(missing)]


def validate_links(dataset: Dataset) -> ValidationReport:
    """Report unlinked register applications and child rows without a parent."""
    d = dataset
    report = ValidationReport()
    apps = d.applications
    linked = apps["appln_id"] > 0
    unlinked = linked & ~np.isin(apps["appln_id"], d.core_applications["appln_id"])
    report.violations.extend(
        Violation(apps.schema.name, int(i) + 1, "unlinked_appln",
                  f"appln_id={apps['appln_id'][i]} has no core application")
        for i in np.flatnonzero(unlinked)
    )
    ids = apps["id"]
    for child in (d.publications, d.parties, d.events, d.proc_steps, d.licensees,
                  d.licensee_states, d.designated_states):
        report.violations.extend(_orphans(child, "id", ids, "register application"))
    core = d.core_applications["appln_id"]
    for child in (d.ipc, d.core_publications, d.legal_status):
        report.violations.extend(_orphans(child, "appln_id", core, "core application"))
    report.violations.extend(_orphans(d.citations, "pat_publn_id", d.core_publications["pat_publn_id"],
                                      "core publication"))
    return report


# ------------------------------------------------------------------ writing


def _format_column(arr: np.ndarray, kind: str) -> list[str]:
    if kind == STR:
        return arr.tolist()
    if kind == INT:
        return arr.astype(str).tolist()
    if kind == OPT_INT:
        return np.where(arr == 0, "", arr.astype(str)).tolist()
    if kind == DATE:
        return np.datetime_as_string(arr, unit="D").tolist()
    if kind == BOOL:
        return np.where(arr, "Y", "N").tolist()
    raise AssertionError(kind)


def write_table(table: Table, path: Path) -> None:
    """Write one table canonically, atomically (temp file then rename)."""
    path = Path(path)
    cols = [_format_column(table[c.name], c.kind) for c in table.schema.columns]
    has_cr = any("\r" in "\n".join(v) for v, c in zip(cols, table.schema.columns) if c.kind == STR)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as f:
            write_csv(f, itertools.chain([table.schema.column_names], zip(*cols)), check_cr=has_cr)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_dataset(dataset: Dataset, directory: str | os.PathLike) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for table in dataset.tables():
        write_table(table, directory / f"{table.schema.name}.csv")
    return directory
