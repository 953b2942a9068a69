import hashlib

import pytest

from patreg import indicators as ind_mod, oracle
from patreg.cli import main
from patreg.ingest import load_dataset, write_dataset
from patreg.model import (
    AUXILIARY_KINDS, REFERENCE_KINDS, IndicatorKind as K, OutputMode, Params, RegisterEvent,
)
from patreg.output import Format, header, render, render_skipped
from patreg.synth import embed_scenarios, generate_fixture, reference_scenarios
from patreg.synth.scenarios import validated_states_33

from builders import D, Rows


def tree_digest(directory):
    h = hashlib.sha256()
    for f in sorted(directory.iterdir()):
        h.update(f.name.encode() + b"\0" + f.read_bytes())
    return h.hexdigest()


@pytest.fixture(scope="module")
def scenario_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("scen")
    write_dataset(embed_scenarios(generate_fixture(seed=5, n_applications=150), reference_scenarios()), d)
    return d


def test_validate_clean(scenario_dir, capsys):
    assert main(["validate", str(scenario_dir)]) == 0
    assert "0 violations" in capsys.readouterr().out


def test_validate_reports_orphan(tmp_path, capsys):
    write_dataset(generate_fixture(seed=1, n_applications=20), tmp_path)
    with open(tmp_path / "tls209_appln_ipc.csv", "a") as fh:
        fh.write("999999999,F03D 1/00\n")
    assert main(["validate", str(tmp_path)]) == 2
    out = capsys.readouterr().out
    assert "999999999" in out and "1 violation" in out


def test_validate_missing_directory(tmp_path):
    assert main(["validate", str(tmp_path / "nope")]) == 64


def test_data_directory_from_environment(scenario_dir, monkeypatch, capsys):
    monkeypatch.setenv("PATREG_DATA", str(scenario_dir))
    assert main(["validate"]) == 0
    assert main(["indicators", "--indicator", "days_to_exam"]) == 0
    assert capsys.readouterr().out.splitlines()[1].startswith("id,appln_id,")


def test_all_writes_nine_tables_matching_oracle(scenario_dir, tmp_path):
    out = tmp_path / "out"
    assert main(["indicators", str(scenario_dir), "--all", "--out", str(out)]) == 0
    ds, _ = load_dataset(scenario_dir)
    names = sorted(p.name for p in out.iterdir())
    assert names == sorted([f"{k.value}.csv" for k in REFERENCE_KINDS] + ["skipped_members.csv"])
    for kind in REFERENCE_KINDS:
        assert (out / f"{kind.value}.csv").read_bytes() == render(oracle.evaluate_naive(ds, kind))
    assert (out / "skipped_members.csv").read_bytes() == render_skipped(
        oracle.evaluate_naive(ds, K.COHORT).skipped)


def test_aux_and_jsonl_paper_compat(scenario_dir, tmp_path):
    out = tmp_path / "out"
    argv = ["indicators", str(scenario_dir), "--all", "--aux", "--mode", "paper-compat",
            "--format", "jsonl", "--out", str(out)]
    assert main(argv) == 0
    ds, _ = load_dataset(scenario_dir)
    for kind in REFERENCE_KINDS + AUXILIARY_KINDS:
        want = render(oracle.evaluate_naive(ds, kind, Params.paper_compat()), Format.JSONL, OutputMode.PAPER_COMPAT)
        assert (out / f"{kind.value}.jsonl").read_bytes() == want


def test_no_exam_events_gives_header_only(tmp_path, capsys):
    write_dataset(Rows().app(1, 10).app(2, 20).dataset(), tmp_path)
    assert main(["indicators", str(tmp_path), "--indicator", "days_to_exam", "--mode", "paper-compat"]) == 0
    assert capsys.readouterr().out == ",".join(header(K.DAYS_TO_EXAM, OutputMode.PAPER_COMPAT)) + "\n"


def test_validated_states_top_row(tmp_path, capsys):
    ds = embed_scenarios(generate_fixture(seed=2, n_applications=50), [validated_states_33()])
    write_dataset(ds, tmp_path)
    assert main(["indicators", str(tmp_path), "--indicator", "validated_states", "--mode", "paper-compat"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "id,appln_id,nb_validated_states"
    assert lines[1] == "8001625,16417372,33"


def test_date_columns_are_iso(tmp_path, capsys):
    rows = Rows().app(1, 10, D(2000, 1, 1)).add("events", RegisterEvent(1, "0009185", D(2000, 3, 1)))
    write_dataset(rows.dataset(), tmp_path)
    assert main(["indicators", str(tmp_path), "--indicator", "days_to_exam"]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "1,10,2000-01-01,2000-03-01,60"


def test_generate_is_deterministic(tmp_path):
    for name in ("a", "b"):
        assert main(["generate", "--seed", "42", "--n", "100", "--out", str(tmp_path / name)]) == 0
    assert tree_digest(tmp_path / "a") == tree_digest(tmp_path / "b")


def test_generate_zero_gives_header_only_files(tmp_path):
    assert main(["generate", "--n", "0", "--out", str(tmp_path)]) == 0
    files = list(tmp_path.iterdir())
    assert len(files) == 13
    assert all(f.read_text().count("\n") == 1 for f in files)


def test_generated_fixture_validates(tmp_path):
    assert main(["generate", "--seed", "7", "--n", "500", "--out", str(tmp_path)]) == 0
    assert main(["validate", str(tmp_path)]) == 0


def test_check_agrees(scenario_dir, capsys):
    assert main(["check", str(scenario_dir), "--seeds", "2", "--max-n", "50"]) == 0
    assert "indexed == oracle" in capsys.readouterr().out


def test_check_reports_mismatch(scenario_dir, monkeypatch, capsys):
    real = ind_mod.evaluate

    def broken(store, kind, params=Params(), cohort=None):
        result = real(store, kind, params, cohort=cohort)
        if K(kind) is K.BACKWARD_CITATIONS and result.rows:
            result = type(result)(result.kind, result.rows[1:], result.skipped, result.warnings)
        return result

    monkeypatch.setattr(ind_mod, "evaluate", broken)
    assert main(["check", str(scenario_dir), "--seeds", "0"]) == 3
    assert "backward_citations" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["indicators", "{d}", "--indicator", "no_such_thing"],
    ["indicators", "{d}"],                                      # nothing selected
    ["indicators", "{d}", "--all"],                             # several tables need --out
    ["indicators", "{d}", "--all", "--year-from", "2010", "--year-to", "2000", "--out", "{d}/o"],
    ["generate", "--p-grant", "2", "--out", "{d}/g"],
    ["validate", "{d}", "--table", "bogus"],
    ["frobnicate"],
])
def test_usage_errors(argv, scenario_dir):
    assert main([a.format(d=scenario_dir) for a in argv]) == 64


def test_invalid_dataset_exits_2(tmp_path):
    write_dataset(generate_fixture(seed=1, n_applications=10), tmp_path)
    with open(tmp_path / "reg101_appln.csv", "a") as fh:
        fh.write("1,2,2005-13-01\n")
    assert main(["indicators", str(tmp_path), "--indicator", "cohort"]) == 2
