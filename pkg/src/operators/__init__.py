"""
FrozenTime - Operators Module

Causal time-varying loop functions and their frozen-time analysis:
- Loop function kinds (memoryless, one-step linear, dead-zone, composition, TI wrapper)
- Frozen-time snapshots, extensions and their variations
- Induced weighted norms and spectral radii
- Frozen closed loops and stabilizing / destabilizing classification
- JSON descriptions of loop functions
"""

from .schedules import (
    MatrixSchedule,
    random_orthogonal,
    similarity_schedule,
    stochastic_schedule,
    radius_profile,
)
from .loop_function import (
    LoopKind,
    LoopFunction,
    MemorylessMatrix,
    OneStepLinear,
    DeadZoneComposite,
    Composition,
    TimeInvariantWrapper,
    dead_zone,
    apply,
    apply_taps,
    snapshot_apply,
    frozen_extension_apply,
    nabla_extension_apply,
)
from .norms import (
    NormMethod,
    NormEstimate,
    CompanionSystem,
    weighted_tap_norm,
    spectral_radius,
    companion_impulse_norm,
    random_search_norm,
    induced_norm_frozen,
    horizon_induced_norm,
)
from .closed_loop import (
    FrozenClass,
    FrozenClosedLoop,
    ClosedLoopNorms,
    companion_matrix,
    frozen_closed_loop,
    classify_frozen,
    closed_loop_frozen_norms,
)
from .serialization import loop_function_from_spec, loop_function_to_spec

__all__ = [
    "MatrixSchedule",
    "random_orthogonal",
    "similarity_schedule",
    "stochastic_schedule",
    "radius_profile",
    "LoopKind",
    "LoopFunction",
    "MemorylessMatrix",
    "OneStepLinear",
    "DeadZoneComposite",
    "Composition",
    "TimeInvariantWrapper",
    "dead_zone",
    "apply",
    "apply_taps",
    "snapshot_apply",
    "frozen_extension_apply",
    "nabla_extension_apply",
    "NormMethod",
    "NormEstimate",
    "CompanionSystem",
    "weighted_tap_norm",
    "spectral_radius",
    "companion_impulse_norm",
    "random_search_norm",
    "induced_norm_frozen",
    "horizon_induced_norm",
    "FrozenClass",
    "FrozenClosedLoop",
    "ClosedLoopNorms",
    "companion_matrix",
    "frozen_closed_loop",
    "classify_frozen",
    "closed_loop_frozen_norms",
    "loop_function_from_spec",
    "loop_function_to_spec",
]
