import hashlib
from collections import defaultdict

import numpy as np
import pytest

from patreg import indicators
from patreg.ingest import load_dataset, validate_links, write_dataset
from patreg.model import Dataset, IndicatorKind as K, check_dataset
from patreg.store import build_store
from patreg.synth import (
    EPC_STATES, GeneratorConfig, Rng, ScenarioCollision, bulletin_of, embed_scenarios,
    generate_fixture, reference_scenarios,
)
from patreg.synth.scenarios import days_to_exam_233, license_countries_36_of_62, raw_state_rows
from patreg.synth.generator import OPPOSITION_CODES, REVOCATION_CODES, LIMITATION_CODES

CHALLENGES = set(OPPOSITION_CODES + REVOCATION_CODES + LIMITATION_CODES)


def digest(directory):
    h = hashlib.sha256()
    for f in sorted(directory.iterdir()):
        h.update(f.name.encode() + b"\0" + f.read_bytes())
    return h.hexdigest()


def test_rng_stream_is_frozen():
    # PCG64 seeded through SeedSequence(0); pinned so fixtures stay reproducible
    r = Rng(0)
    assert [r.u64() for _ in range(3)] == [11749869230777074271, 4976686463289251617, 755828109848996024]
    r = Rng(0)
    assert [r.below(10) for _ in range(10)] == [6, 2, 0, 0, 8, 9, 6, 7, 5, 9]
    assert Rng(1).uniform() == 0.5118216247002567


def test_rng_helpers():
    r = Rng(9)
    assert all(3 <= r.between(3, 5) <= 5 for _ in range(200))
    s = r.sample(range(10), 4)
    assert len(set(s)) == 4 and r.sample("ab", 5) in (["a", "b"], ["b", "a"])


def test_zero_applications_gives_empty_dataset():
    assert all(len(t) == 0 for t in generate_fixture(seed=1, n_applications=0).tables())


def test_same_seed_same_bytes(tmp_path):
    for name in ("a", "b"):
        write_dataset(generate_fixture(seed=42, n_applications=150), tmp_path / name)
    assert digest(tmp_path / "a") == digest(tmp_path / "b")
    write_dataset(generate_fixture(seed=43, n_applications=150), tmp_path / "c")
    assert digest(tmp_path / "a") != digest(tmp_path / "c")


def test_seed_42_thousand_passes_strict_validation(tmp_path):
    ds = generate_fixture(seed=42, n_applications=1000)
    violations, warnings = check_dataset(ds)
    assert violations == [] and warnings == []
    assert validate_links(ds).clean
    write_dataset(ds, tmp_path)
    _, report = load_dataset(tmp_path)     # STRICT by default
    assert report.clean


def test_not_entered_share_near_configured():
    ds = generate_fixture(seed=2024, n_applications=10_000)
    share = float(np.mean(ds.applications["appln_id"] == 0))
    assert abs(share - GeneratorConfig.p_not_entered) <= 0.05


@pytest.mark.parametrize("bad", [dict(p_grant=1.5), dict(p_wind=-0.1), dict(n_applications=-1),
                                 dict(states=()), dict(states=EPC_STATES + ("XX",)),
                                 dict(year_from=2010, year_to=2000)])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        GeneratorConfig(**bad)


def test_lifecycle_coherence():
    ds = generate_fixture(seed=8, n_applications=800)
    filed = dict(zip(ds.applications["id"].tolist(), ds.applications["appln_filing_date"].tolist()))
    pubs = defaultdict(list)
    for p in ds.publications.rows():
        pubs[p.id].append((p.publn_kind, (p.bulletin_year, p.bulletin_nr)))
    for rid, items in pubs.items():
        start = bulletin_of(filed[rid])
        assert all(b >= start for _, b in items)
        kinds = {k for k, _ in items}
        if kinds & {"B2", "B3"}:
            assert "B1" in kinds
    grant = {rid: min(b for k, b in items if k == "B1") for rid, items in pubs.items()
             if any(k == "B1" for k, _ in items)}
    for e in ds.events.rows():
        if e.event_code == "0009185":
            assert e.event_date >= filed[e.id]
        if e.event_code in CHALLENGES:
            assert e.id in grant and bulletin_of(e.event_date) >= grant[e.id]
    assert check_dataset(ds)[1] == []     # is_latest consistent everywhere


def test_embed_into_empty_equals_scenarios_alone():
    specs = reference_scenarios()
    alone = Dataset()
    for s in specs:
        alone = alone.concat(s.dataset())
    assert embed_scenarios(Dataset(), specs) == alone


def test_embedded_exam_scenario_yields_233():
    ds = embed_scenarios(generate_fixture(seed=3, n_applications=200), [days_to_exam_233()])
    got = indicators.evaluate(build_store(ds), K.DAYS_TO_EXAM).values()
    assert got[8005567].days_to_exam == 233


def test_license_scenario_36_distinct_of_62_rows():
    ds = embed_scenarios(generate_fixture(seed=3, n_applications=200), [license_countries_36_of_62()])
    assert raw_state_rows(ds, 10742603) == 62
    got = indicators.evaluate(build_store(ds), K.LICENSE_COUNTRIES).values()
    assert got[10742603].nb_lic_ctry == 36


def test_embedding_keeps_strict_validity(scenario_dataset):
    violations, warnings = check_dataset(scenario_dataset)
    assert violations == [] and warnings == []
    assert validate_links(scenario_dataset).clean


def test_collisions_are_rejected():
    spec = days_to_exam_233()
    with pytest.raises(ScenarioCollision):
        embed_scenarios(spec.dataset(), [spec])
