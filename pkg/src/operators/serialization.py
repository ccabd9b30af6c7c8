"""
FrozenTime - Loop Function Documents

JSON descriptions of loop functions: a kind tag plus either explicit matrix
arrays per time index or a seeded generator spec.
"""

import logging
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter, ValidationError, model_validator

from ..exceptions import InputError
from .loop_function import (
    Composition,
    DeadZoneComposite,
    LoopFunction,
    MemorylessMatrix,
    OneStepLinear,
    TimeInvariantWrapper,
)
from .schedules import MatrixSchedule, radius_profile, similarity_schedule, stochastic_schedule

logger = logging.getLogger(__name__)


class ScheduleModel(BaseModel):
    """Matrix schedule: explicit `matrices`, a constant `matrix`, or a `generator`."""
    start_time: int = 0
    matrices: Optional[List[List[List[float]]]] = None
    matrix: Optional[List[List[float]]] = None
    generator: Optional[Literal["similarity", "stochastic"]] = None
    seed: int = 0
    horizon: Optional[int] = Field(default=None, ge=1)
    radii: Optional[List[float]] = Field(default=None, description="Eigenvalues (similarity)")
    rotation_step: Tuple[float, float] = (0.0, 0.0)
    dimension: Optional[int] = Field(default=None, ge=1)
    radius: Optional[float] = Field(default=None, description="Perron root (stochastic)")
    episodes: List[Tuple[int, int]] = Field(default_factory=list)
    episode_radius: Optional[float] = None
    jitter: float = Field(default=0.01, ge=0.0)

    @model_validator(mode="after")
    def _one_source(self):
        given = [self.matrices is not None, self.matrix is not None, self.generator is not None]
        if sum(given) != 1:
            raise ValueError("schedule needs exactly one of 'matrices', 'matrix' or 'generator'")
        if self.generator is not None and self.horizon is None:
            raise ValueError("generated schedules need 'horizon'")
        if self.generator == "similarity" and not self.radii:
            raise ValueError("similarity schedules need 'radii'")
        if self.generator == "stochastic" and (self.dimension is None or self.radius is None):
            raise ValueError("stochastic schedules need 'dimension' and 'radius'")
        return self

    def build(self) -> MatrixSchedule:
        if self.matrices is not None:
            return MatrixSchedule(self.matrices, start_time=self.start_time)
        if self.matrix is not None:
            return MatrixSchedule(np.asarray(self.matrix, dtype=float)[np.newaxis], start_time=self.start_time)

        rng = np.random.default_rng(self.seed)
        if self.generator == "similarity":
            eigenvalues = np.tile(np.asarray(self.radii, dtype=float), (self.horizon, 1))
            lo, hi = self.rotation_step
            steps = rng.uniform(lo, hi, self.horizon)
            return similarity_schedule(eigenvalues, steps, rng, start_time=self.start_time)

        roots = radius_profile(self.horizon, self.radius, self.episodes, self.episode_radius)
        return stochastic_schedule(roots, self.dimension, rng, jitter=self.jitter, start_time=self.start_time)


class MemorylessModel(BaseModel):
    kind: Literal["memoryless_matrix"]
    schedule: ScheduleModel

    def build(self) -> LoopFunction:
        return MemorylessMatrix(self.schedule.build())


class OneStepModel(BaseModel):
    kind: Literal["one_step_linear"]
    a: ScheduleModel
    b: ScheduleModel

    def build(self) -> LoopFunction:
        return OneStepLinear(self.a.build(), self.b.build())


class DeadZoneModel(BaseModel):
    kind: Literal["dead_zone_composite"]
    inner: "LoopFunctionSpec"
    width: float = Field(default=0.5, ge=0.0)

    def build(self) -> LoopFunction:
        return DeadZoneComposite(self.inner.build(), self.width)


class CompositionModel(BaseModel):
    kind: Literal["composition"]
    outer: "LoopFunctionSpec"
    inner: "LoopFunctionSpec"

    def build(self) -> LoopFunction:
        return Composition(self.outer.build(), self.inner.build())


class TimeInvariantModel(BaseModel):
    kind: Literal["time_invariant_wrapper"]
    inner: "LoopFunctionSpec"
    frozen_at: int = 0

    def build(self) -> LoopFunction:
        return TimeInvariantWrapper(self.inner.build(), self.frozen_at)


LoopFunctionSpec = Annotated[
    Union[MemorylessModel, OneStepModel, DeadZoneModel, CompositionModel, TimeInvariantModel],
    Field(discriminator="kind"),
]

for _model in (DeadZoneModel, CompositionModel, TimeInvariantModel):
    _model.model_rebuild()

_adapter = TypeAdapter(LoopFunctionSpec)


def loop_function_from_spec(data: Union[Dict[str, Any], BaseModel]) -> LoopFunction:
    """Build a LoopFunction from its JSON description."""
    if isinstance(data, BaseModel):
        return data.build()
    try:
        return _adapter.validate_python(data).build()
    except ValidationError as e:
        raise InputError(f"Invalid loop function description: {e}") from e


def _schedule_to_spec(schedule: MatrixSchedule) -> Dict[str, Any]:
    return {"start_time": schedule.start_time, "matrices": schedule.matrices.tolist()}


def loop_function_to_spec(H: LoopFunction) -> Dict[str, Any]:
    """Explicit JSON description of a LoopFunction."""
    if isinstance(H, MemorylessMatrix):
        return {"kind": H.kind.value, "schedule": _schedule_to_spec(H.schedule)}
    if isinstance(H, OneStepLinear):
        return {"kind": H.kind.value, "a": _schedule_to_spec(H.a), "b": _schedule_to_spec(H.b)}
    if isinstance(H, DeadZoneComposite):
        return {"kind": H.kind.value, "inner": loop_function_to_spec(H.inner), "width": H.width}
    if isinstance(H, Composition):
        return {
            "kind": H.kind.value,
            "outer": loop_function_to_spec(H.outer),
            "inner": loop_function_to_spec(H.inner),
        }
    if isinstance(H, TimeInvariantWrapper):
        return {"kind": H.kind.value, "inner": loop_function_to_spec(H.inner), "frozen_at": H.frozen_at}
    raise InputError(f"Cannot describe loop function of type {type(H).__name__}")
