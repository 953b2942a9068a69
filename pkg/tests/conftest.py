import os

import pytest
from hypothesis import HealthCheck, settings

from patreg import kernels
from patreg.synth import embed_scenarios, generate_fixture, reference_scenarios

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session", autouse=True)
def _jit_warm():
    kernels.warmup()


@pytest.fixture(scope="session")
def scenario_dataset():
    """Seed-42 noise with every reference scenario embedded."""
    return embed_scenarios(generate_fixture(seed=42, n_applications=300), reference_scenarios())
