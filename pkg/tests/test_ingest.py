import datetime as dt
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from patreg.ingest import (
    DatasetManifest, IngestError, ValidationReport, load_dataset, read_table, validate_links,
    write_dataset,
)
from patreg.model import (
    Citation, CorePublication, Dataset, Party, PartyType, ProcedureStep, RegisterEvent,
    SCHEMA_BY_NAME, ValidationMode,
)
from patreg.synth import generate_fixture

from builders import D, Rows

STRICT, LENIENT = ValidationMode.STRICT, ValidationMode.LENIENT
REG101 = "id,appln_id,appln_filing_date,status\n"


def put(directory: Path, name: str, text: str | bytes) -> Path:
    path = directory / f"{name}.csv"
    path.write_bytes(text if isinstance(text, bytes) else text.encode("utf-8"))
    return path


def test_header_only_table_gives_empty_dataset(tmp_path):
    put(tmp_path, "reg101_appln", REG101)
    ds, report = load_dataset(tmp_path)
    assert len(ds.applications) == 0
    assert report.clean and report.warnings == []
    assert all(len(t) == 0 for t in ds.tables())


def test_invalid_month_is_fatal_in_strict_mode(tmp_path):
    put(tmp_path, "reg101_appln", REG101 + "1,10,2008-03-26,\n2,11,2008-13-01,\n")
    with pytest.raises(IngestError) as err:
        load_dataset(tmp_path, STRICT)
    assert err.value.table == "reg101_appln" and err.value.row == 2
    assert "reg101_appln row 2" in str(err.value)


def test_invalid_month_is_dropped_in_lenient_mode(tmp_path):
    put(tmp_path, "reg101_appln", REG101 + "1,10,2008-03-26,\n2,11,2008-13-01,\n")
    ds, report = load_dataset(tmp_path, LENIENT)
    assert ds.applications["id"].tolist() == [1]
    assert [(v.table, v.row, v.kind) for v in report.violations] == [("reg101_appln", 2, "malformed_date")]
    assert report.rows_dropped("reg101_appln") == 1


def test_round_trip_equals_generated(tmp_path):
    generated = generate_fixture(seed=42, n_applications=100)
    write_dataset(generated, tmp_path)
    loaded, report = load_dataset(tmp_path)
    assert report.clean
    for a, b in zip(generated.tables(), loaded.tables()):
        assert a == b, a.schema.name


def test_missing_directory(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_dataset(tmp_path / "nope")


def test_header_is_case_insensitive_order_free_and_extra_columns_ignored(tmp_path):
    put(tmp_path, "reg101_appln", "Status,APPLN_FILING_DATE,extra,Id,appln_id\nwithdrawn,2001-02-03,zz,7,0\n")
    ds, _ = load_dataset(tmp_path)
    assert list(ds.applications.rows())[0].id == 7
    assert ds.applications["status"].tolist() == ["withdrawn"]


def test_missing_required_column_is_fatal_even_when_lenient(tmp_path):
    put(tmp_path, "reg101_appln", "id,appln_filing_date\n1,2001-01-01\n")
    with pytest.raises(IngestError, match="malformed_header"):
        load_dataset(tmp_path, LENIENT)


def test_optional_column_may_be_absent(tmp_path):
    put(tmp_path, "reg101_appln", "id,appln_id,appln_filing_date\n1,0,2001-01-01\n")
    ds, _ = load_dataset(tmp_path)
    assert ds.applications["status"].tolist() == [""]


def test_legal_status_aliases_and_optional_year(tmp_path):
    put(tmp_path, "tls221_inpadoc_prs", "appln_id,prs_code,l501ep,l520ep\n5,PGFP,DE,2014\n5,REG,,\n")
    ds, _ = load_dataset(tmp_path)
    assert ds.legal_status["country"].tolist() == ["DE", ""]
    assert [r.fee_payment_year for r in ds.legal_status.rows()] == [2014, None]


def test_field_count_errors(tmp_path):
    put(tmp_path, "reg201_proc_step", "id,step_code\n1,PFEE\n2\n3,LOPR,extra\n4,EXAM\n")
    with pytest.raises(IngestError, match="field_count"):
        load_dataset(tmp_path, STRICT)
    ds, report = load_dataset(tmp_path, LENIENT)
    assert ds.proc_steps["id"].tolist() == [1, 4]
    assert [(v.row, v.kind) for v in report.violations] == [(2, "field_count"), (3, "field_count")]


def test_lenient_accounting(tmp_path):
    put(tmp_path, "reg107_parties",
        "id,type,seq_nr,set_seq_nr,is_latest,name,customer_id,bulletin_year,bulletin_nr\n"
        "1,A,1,1,Y,Acme,,2005,1\n"
        "1,X,1,1,Y,Bad type,,2005,1\n"
        "1,A,1,1,Y,Duplicate key,,2005,1\n"
        "1,R,1,1,maybe,Bad bool,,2005,1\n"
        "1,R,2,1,N,Bad week,,2005,54\n"
        "1,R,3,0,N,Zero set,,2005,5\n")
    ds, report = load_dataset(tmp_path, LENIENT)
    t = "reg107_parties"
    assert report.rows_in[t] == 6
    assert report.rows_loaded[t] == len(ds.parties) == 1
    assert report.rows_dropped(t) == len(report.violations) == 5
    assert sorted(report.counts().items()) == [
        ("duplicate_key", 1), ("invalid_value", 1), ("malformed_bool", 1), ("out_of_range", 2)]
    assert sorted(v.row for v in report.violations) == [2, 3, 4, 5, 6]


@pytest.mark.parametrize("cell,kind", [("12x", "malformed_int"), ("", "missing_value"),
                                       ("99999999999999999999", "malformed_int"), ("1.5", "malformed_int")])
def test_bad_integers(tmp_path, cell, kind):
    put(tmp_path, "reg201_proc_step", f"id,step_code\n{cell},PFEE\n")
    _, report = load_dataset(tmp_path, LENIENT)
    assert [v.kind for v in report.violations] == [kind]


@pytest.mark.parametrize("cell", ["2008-3-1", "20080301", "2008-02-30", "2008-03-01T00:00", "2008/03/01"])
def test_dates_must_be_iso_calendar_days(tmp_path, cell):
    put(tmp_path, "reg301_event_data", f"id,event_code,event_date\n1,0009185,{cell}\n")
    _, report = load_dataset(tmp_path, LENIENT)
    assert [v.kind for v in report.violations] == ["malformed_date"]


def test_null_date_sentinel_is_off_by_default(tmp_path):
    put(tmp_path, "reg301_event_data", "id,event_code,event_date\n1,X,9999-12-31\n2,Y,\n")
    ds, report = load_dataset(tmp_path, LENIENT)
    assert ds.events["event_date"].tolist() == [dt.date(9999, 12, 31)]
    manifest = DatasetManifest(tmp_path, mode=LENIENT, null_date_sentinels=("9999-12-31",))
    ds, report = load_dataset(manifest)
    assert len(ds.events) == 0 and report.counts()["missing_value"] == 2


def test_quoting_bom_and_crlf(tmp_path):
    text = '\ufeffid,type,seq_nr,set_seq_nr,is_latest,name,customer_id,bulletin_year,bulletin_nr\r\n' \
           '1,A,1,1,Y,"Smith, Jones & ""Partners""\r\nGmbH",C1,2005,1\r\n'
    put(tmp_path, "reg107_parties", text)
    ds, _ = load_dataset(tmp_path)
    assert ds.parties["name"].tolist() == ['Smith, Jones & "Partners"\r\nGmbH']


def test_invalid_utf8_and_nul_bytes(tmp_path):
    put(tmp_path, "reg201_proc_step", b"id,step_code\n1,PF\xffEE\n2,LO\x00PR\n")
    with pytest.raises(IngestError, match="encoding"):
        load_dataset(tmp_path, STRICT)
    ds, report = load_dataset(tmp_path, LENIENT)
    assert {v.kind for v in report.violations} == {"encoding", "nul_byte"}
    assert ds.proc_steps["step_code"].tolist()[1] == "LOPR"


def test_manifest_overrides_and_unknown_tables(tmp_path):
    sub = tmp_path / "elsewhere"
    sub.mkdir()
    put(sub, "apps", REG101 + "3,0,2001-01-01,\n")
    ds, _ = load_dataset(DatasetManifest(tmp_path, {"reg101_appln": "elsewhere/apps.csv"}))
    assert ds.applications["id"].tolist() == [3]
    with pytest.raises(ValueError):
        DatasetManifest(tmp_path, {"reg999": "x.csv"})


def test_write_is_canonical_and_atomic(tmp_path):
    ds = generate_fixture(seed=5, n_applications=30)
    write_dataset(ds, tmp_path / "a")
    loaded, _ = load_dataset(tmp_path / "a")
    write_dataset(loaded, tmp_path / "b")
    for f in sorted((tmp_path / "a").iterdir()):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()
    assert not list((tmp_path / "a").glob(".*"))   # no temp files left behind


names = st.text(st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"), max_size=12)


@settings(max_examples=60)
@given(st.lists(names, min_size=1, max_size=6))
def test_arbitrary_names_round_trip(tmp_path_factory, values):
    d = tmp_path_factory.mktemp("names")
    rows = [Party(1, PartyType.INVENTOR, i + 1, 1, True, v, v[::-1], 2005, 1) for i, v in enumerate(values)]
    ds = Dataset.from_rows(parties=rows)
    write_dataset(ds, d)
    loaded, report = load_dataset(d)
    assert loaded.parties == ds.parties


# ------------------------------------------------------------ link checks


def test_links_clean_on_consistent_dataset():
    ds = Rows().app(1, 10).applicant(1, "A").dataset()
    assert validate_links(ds).clean


def test_single_orphan_party():
    ds = Rows().app(1, 10).applicant(999, "Ghost").dataset()
    report = validate_links(ds)
    assert [(v.table, v.kind) for v in report.violations] == [("reg107_parties", "orphan")]


def test_ten_planted_orphans_across_five_tables():
    base = generate_fixture(seed=11, n_applications=50)
    planted = {"reg107_parties": 3, "reg301_event_data": 2, "reg201_proc_step": 2,
               "tls212_citation": 2, "tls211_pat_publn": 1}
    extra = (Rows()
             .add("parties", *[Party(990_000 + k, PartyType.APPLICANT, 1, 1, True, "Ghost", "", 2005, 1)
                               for k in range(3)])
             .add("events", *[RegisterEvent(991_000 + k, "0009185", D(2005, 1, 1)) for k in range(2)])
             .add("proc_steps", *[ProcedureStep(992_000 + k, "PFEE") for k in range(2)])
             .add("citations", *[Citation(993_000 + k, 1, 1) for k in range(2)])
             .add("core_publications", CorePublication(994_000, 995_000))
             .dataset())
    report = validate_links(base.concat(extra))
    assert len(report) == 10
    assert dict(report.counts_by_table()) == planted


def test_unlinked_register_application():
    ds = Dataset.from_rows(applications=list(Rows().app(1, 10).dataset().applications.rows()))
    report = validate_links(ds)
    assert report.counts() == {"unlinked_appln": 1}


def test_report_rendering():
    r = ValidationReport()
    assert r.render().startswith("0 violations")
    put_report = validate_links(Rows().applicant(5, "x").dataset())
    assert put_report.render().splitlines()[0] == "1 violations"


def test_read_table_missing_file_is_empty(tmp_path):
    report = ValidationReport()
    t = read_table(SCHEMA_BY_NAME["reg109_design_states"], tmp_path / "none.csv", STRICT, report)
    assert len(t) == 0 and report.rows_in["reg109_design_states"] == 0


@pytest.mark.parametrize("value", ["\r", "a\rb", "\r\n", '"\r', "x,\r"])
def test_carriage_returns_in_text_round_trip(tmp_path, value):
    ds = Dataset.from_rows(parties=[Party(1, PartyType.INVENTOR, 1, 1, True, value, "c", 2005, 1)])
    write_dataset(ds, tmp_path)
    loaded, _ = load_dataset(tmp_path)
    assert loaded.parties == ds.parties
