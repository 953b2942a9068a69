"""Rendering of indicator results as delimiter-separated or JSON-lines bytes.

Rendering is a pure function of the result, so identical inputs give
identical bytes. CSV uses ``\\n`` line endings and minimal quoting, dates
are ISO, booleans are Y/N, averages keep their two decimals.
"""

from __future__ import annotations

import csv
import datetime as dt
import enum
import io
import json
import os
import tempfile
from decimal import Decimal
from pathlib import Path

from .model import IndicatorKind, IndicatorResult, OutputMode

K = IndicatorKind


class Format(str, enum.Enum):
    CSV = "csv"
    JSONL = "jsonl"

    @property
    def suffix(self) -> str:
        return "." + self.value


def header(kind: IndicatorKind, mode: OutputMode = OutputMode.DEFAULT) -> tuple[str, ...]:
    """Column names. In paper-compat mode they match the published result tables exactly."""
    kind = IndicatorKind(kind)
    compat = mode is OutputMode.PAPER_COMPAT
    if kind is K.COHORT:
        return ("appln_id",) if compat else ("appln_id", "id")
    if kind is K.AVG_PROC_STEPS:
        return ("name", "avg_proc_steps")
    tail = {
        K.BACKWARD_CITATIONS: ("n_cit",),
        K.LICENSE_COUNTRIES: ("nb_lic_ctry",) if compat else ("nb_lic_ctry", "has_all_designation"),
        K.APPLICANT_SETS: ("nb_changes",),
        K.TRANSFER_SIGNALS: ("n_applicant_sets", "n_distinct_customer_ids", "n_appr_events"),
        K.DAYS_TO_EXAM: ("appln_filing_date", "exam_date", "days_to_exam"),
        K.FIRST_REPRESENTATIVE: ("bulletin_year", "bulletin_nr", "name"),
        K.VALIDITY_CHALLENGES: ("nb_events",),
        K.AMENDMENT_KINDS: ("amendment_kinds",),
        K.VALIDATED_STATES: ("nb_validated_states",),
    }[kind]
    return ("id", "appln_id") + tail


def records(result: IndicatorResult, mode: OutputMode = OutputMode.DEFAULT) -> list[tuple]:
    """Flatten a result into tuples aligned with ``header``."""
    kind = result.kind
    compat = mode is OutputMode.PAPER_COMPAT
    out: list[tuple] = []
    for r in result.rows:
        if kind is K.COHORT:
            out.append((r.appln_id,) if compat else (r.appln_id, r.id))
        elif kind is K.AVG_PROC_STEPS:
            out.append((r.name, r.avg_proc_steps))
        elif kind is K.LICENSE_COUNTRIES:
            v = r.value
            out.append((r.id, r.appln_id, v.nb_lic_ctry) if compat
                       else (r.id, r.appln_id, v.nb_lic_ctry, v.has_all_designation))
        elif kind is K.TRANSFER_SIGNALS:
            out.append((r.id, r.appln_id, *r.value))
        elif kind is K.DAYS_TO_EXAM:
            v = r.value
            out.append((r.id, r.appln_id, v.appln_filing_date, v.exam_date, v.days_to_exam))
        elif kind is K.FIRST_REPRESENTATIVE:
            # one line per agent listed in the first bulletin
            v = r.value
            out.extend((r.id, r.appln_id, v.bulletin_year, v.bulletin_nr, name) for name in v.names)
        elif kind is K.AMENDMENT_KINDS:
            out.append((r.id, r.appln_id, " ".join(r.value)))
        else:
            out.append((r.id, r.appln_id, r.value))
    return out


def _text(v) -> str:
    if isinstance(v, bool):
        return "Y" if v else "N"
    if isinstance(v, dt.date):
        return v.isoformat()
    return str(v)


def _json(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Decimal):
        return str(v)  # a JSON number with both decimals kept
    if isinstance(v, dt.date):
        return json.dumps(v.isoformat())
    return json.dumps(v, ensure_ascii=False)


def _quote(v) -> str:
    v = str(v)
    return '"' + v.replace('"', '""') + '"' if any(c in v for c in ',"\r\n') else v


def write_csv(fh, rows, check_cr: bool = True) -> None:
    """Minimal quoting with ``\n`` line endings.

    A field holding a bare ``\r`` is quoted too; the csv module only quotes
    characters of its own line terminator, so it would leave that one bare
    and the file would not read back. Callers that know no field holds one
    pass ``check_cr=False`` to skip the per-row scan.
    """
    w = csv.writer(fh, lineterminator="\n")
    if not check_cr:
        w.writerows(rows)
        return
    for row in rows:
        if any(isinstance(v, str) and "\r" in v for v in row):
            fh.write(",".join(map(_quote, row)) + "\n")
        else:
            w.writerow(row)


def render(result: IndicatorResult, fmt: Format = Format.CSV,
           mode: OutputMode = OutputMode.DEFAULT) -> bytes:
    cols = header(result.kind, mode)
    rows = records(result, mode)
    if Format(fmt) is Format.CSV:
        buf = io.StringIO(newline="")
        write_csv(buf, [cols] + [[_text(v) for v in row] for row in rows])
        return buf.getvalue().encode("utf-8")
    lines = ("{" + ",".join(f"{json.dumps(c)}:{_json(v)}" for c, v in zip(cols, row)) + "}\n" for row in rows)
    return "".join(lines).encode("utf-8")


def render_skipped(skipped: tuple[int, ...]) -> bytes:
    """Sidecar listing cohort members that have no register row."""
    body = "".join(f"{a},not_in_register\n" for a in sorted(skipped))
    return ("appln_id,reason\n" + body).encode("utf-8")


def write_atomic(path: Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
