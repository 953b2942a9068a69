"""Deterministic fixture generation and scenario embedding."""

from .generator import EPC_STATES, GeneratorConfig, bulletin_of, generate_fixture
from .rng import Rng
from .scenarios import ScenarioCollision, ScenarioSpec, embed_scenarios, reference_scenarios

__all__ = [
    "EPC_STATES", "GeneratorConfig", "Rng", "ScenarioCollision", "ScenarioSpec",
    "bulletin_of", "embed_scenarios", "generate_fixture", "reference_scenarios",
]
