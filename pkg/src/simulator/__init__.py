"""
FrozenTime - Simulator Module

Closed-loop simulation of x = Fu + G T x and scenario plumbing:
- Scenarios and closed-form inputs
- Forward simulation with divergence detection
- Per-time certificate traces and gain checks
- Example 1 / Example 2 generators and random all-stabilizing scenarios
- JSON scenario files and thread-pool batches
"""

from .scenario import InputSpec, Scenario
from .engine import (
    SimResult,
    GainCheck,
    simulate,
    state_norm_trace,
    collect_certificate_inputs,
    with_norm_traces,
    verify_gain_bound,
)
from .examples import (
    episode_schedule,
    episode_indicator,
    example2_eigenvalues,
    build_example1,
    build_example2,
    random_stable_scenario,
)
from .files import (
    ScenarioDocument,
    scenario_from_document,
    scenario_to_document,
    load_scenario,
    dump_scenario,
    example_document,
)
from .batch import run_batch

__all__ = [
    "InputSpec",
    "Scenario",
    "SimResult",
    "GainCheck",
    "simulate",
    "state_norm_trace",
    "collect_certificate_inputs",
    "with_norm_traces",
    "verify_gain_bound",
    "episode_schedule",
    "episode_indicator",
    "example2_eigenvalues",
    "build_example1",
    "build_example2",
    "random_stable_scenario",
    "ScenarioDocument",
    "scenario_from_document",
    "scenario_to_document",
    "load_scenario",
    "dump_scenario",
    "example_document",
    "run_batch",
]
