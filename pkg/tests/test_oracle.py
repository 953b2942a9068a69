import ast
import sys
from pathlib import Path

import pytest

import patreg.oracle
from patreg import indicators, oracle
from patreg.equivalence import first_difference, seed_fixture
from patreg.model import Dataset, IndicatorKind as K, Params
from patreg.store import build_store
from patreg.synth import reference_scenarios

from scenario_check import mismatches


@pytest.mark.parametrize("kind", list(K))
def test_empty_dataset_gives_empty_results(kind):
    result = oracle.evaluate_naive(Dataset(), kind)
    assert result.rows == () and result.skipped == ()


@pytest.mark.parametrize("spec", reference_scenarios(), ids=lambda s: s.name)
def test_oracle_reproduces_scenario_values(spec):
    ds = spec.dataset()
    assert mismatches(spec, lambda kind, params: oracle.evaluate_naive(ds, kind, params)) == []


def test_seed_13_agrees_with_indexed_path():
    assert first_difference(seed_fixture(13)) is None


def test_paper_compat_bundle_agrees():
    ds = seed_fixture(21, 300)
    store = build_store(ds)
    params = Params.paper_compat()
    for kind in K:
        assert indicators.evaluate(store, kind, params) == oracle.evaluate_naive(ds, kind, params)


def test_oracle_is_independent_of_store_and_indicators():
    # The oracle may share model types only; anything else would make agreement circular.
    tree = ast.parse(Path(patreg.oracle.__file__).read_text())
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            if node.level:
                assert node.module == "model", node.module
            else:
                assert node.module.split(".")[0] in sys.stdlib_module_names, node.module
        elif isinstance(node, ast.Import):
            for alias in node.names:
                assert alias.name.split(".")[0] in sys.stdlib_module_names, alias.name
