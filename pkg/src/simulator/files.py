"""
FrozenTime - Scenario Files

JSON scenario documents. A document either references a seeded example
generator or spells out F and G explicitly; either way every random choice
is reproduced from the seed.
"""

import json
import logging
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from ..config import settings
from ..exceptions import InputError
from ..operators import loop_function_from_spec, loop_function_to_spec
from ..operators.serialization import LoopFunctionSpec
from ..utils import write_json
from .examples import build_example1, build_example2, random_stable_scenario
from .scenario import InputSpec, Scenario

logger = logging.getLogger(__name__)


class ExampleReference(BaseModel):
    """Seeded generator call."""
    name: Literal["example1", "example2", "random"]
    seed: int = 0
    horizon: Optional[int] = Field(default=None, ge=1)
    episodes: Optional[List[Tuple[int, int]]] = Field(
        default=None,
        description="Destabilizing episodes (example1 only)"
    )
    dimension: int = Field(default=2, ge=1, description="State dimension (random only)")


class HorizonModel(BaseModel):
    start: int = 0
    length: int = Field(ge=1)


class ScenarioDocument(BaseModel):
    """Scenario file, schema_version 1."""
    document: Literal["scenario"] = "scenario"
    schema_version: int = settings.schema_version
    name: Optional[str] = None
    example: Optional[ExampleReference] = None
    F: Optional[LoopFunctionSpec] = None
    G: Optional[LoopFunctionSpec] = None
    input: Optional[InputSpec] = None
    horizon: Optional[HorizonModel] = None
    sigma: Optional[float] = None
    sigma0: Optional[float] = None
    rho: Optional[float] = None
    seed: int = 0
    time_sequence: Optional[List[int]] = None
    n_width: Optional[int] = None
    max_gap: Optional[int] = None

    @model_validator(mode="after")
    def _one_definition(self):
        explicit = [self.F is not None, self.G is not None, self.input is not None, self.horizon is not None]
        if self.example is not None and any(explicit):
            raise ValueError("use either 'example' or explicit 'F', 'G', 'input' and 'horizon', not both")
        if self.example is None and not all(explicit):
            raise ValueError("explicit scenarios need 'F', 'G', 'input' and 'horizon'")
        return self


def _overrides(doc: ScenarioDocument) -> Dict[str, Any]:
    values = {
        "sigma": doc.sigma,
        "sigma0": doc.sigma0,
        "rho": doc.rho,
        "time_sequence": doc.time_sequence,
        "n_width": doc.n_width,
        "max_gap": doc.max_gap,
    }
    return {k: v for k, v in values.items() if v is not None}


def _from_example(doc: ScenarioDocument) -> Scenario:
    ref = doc.example
    params = {k: v for k, v in _overrides(doc).items() if k in ("sigma", "sigma0", "rho")}
    if ref.horizon is not None:
        params["horizon"] = ref.horizon
    if ref.name == "example1":
        s = build_example1(ref.seed, episodes=ref.episodes, **params)
    elif ref.name == "example2":
        s = build_example2(ref.seed, **params)
    else:
        s = random_stable_scenario(ref.seed, dimension=ref.dimension, **params)

    rest = {k: v for k, v in _overrides(doc).items() if k not in ("sigma", "sigma0", "rho")}
    if doc.name or rest:
        s = replace(s, **rest, name=doc.name or s.name)
    return s


def scenario_from_document(data: Union[Dict[str, Any], ScenarioDocument], name: Optional[str] = None) -> Scenario:
    """
    Build a Scenario from a parsed scenario document.

    Args:
        data: Document as a dict or a validated model
        name: Fallback name (usually the file stem)

    Returns:
        Scenario

    Raises:
        InputError: On schema violations or an unsupported schema_version
    """
    try:
        doc = data if isinstance(data, ScenarioDocument) else ScenarioDocument.model_validate(data)
    except ValidationError as e:
        raise InputError(f"Invalid scenario document: {e}") from e
    if doc.schema_version != settings.schema_version:
        raise InputError(f"Unsupported scenario schema_version {doc.schema_version}")

    if doc.example is not None:
        s = _from_example(doc)
        if doc.name is None and name is not None:
            s = replace(s, name=name)
        return s

    return Scenario(
        name=doc.name or name or "scenario",
        F=loop_function_from_spec(doc.F),
        G=loop_function_from_spec(doc.G),
        input=doc.input,
        horizon=range(doc.horizon.start, doc.horizon.start + doc.horizon.length),
        seed=doc.seed,
        **_overrides(doc),
    )


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Read a scenario file; the file stem names scenarios without a 'name'."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"Scenario file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e
    logger.info(f"Loaded scenario file {path}")
    return scenario_from_document(data, name=path.stem)


def example_document(
    name: str,
    seed: int = 0,
    horizon: Optional[int] = None,
    episodes: Optional[List[Tuple[int, int]]] = None,
    dimension: Optional[int] = None
) -> Dict[str, Any]:
    """Compact document referencing a generator."""
    example: Dict[str, Any] = {"name": name, "seed": seed}
    if dimension is not None:
        example["dimension"] = dimension
    if horizon is not None:
        example["horizon"] = horizon
    if episodes is not None:
        example["episodes"] = [list(e) for e in episodes]
    return {
        "document": "scenario",
        "schema_version": settings.schema_version,
        "name": f"{name}_seed{seed}",
        "example": example,
    }


def scenario_to_document(s: Scenario, explicit: bool = True) -> Dict[str, Any]:
    """
    Describe a Scenario as a document.

    With explicit=False a generated scenario is written as its generator
    reference, which keeps the file small.
    """
    if not explicit and s.source is not None:
        doc = example_document(s.source["example"], s.source["seed"], s.source.get("horizon"),
                               s.source.get("episodes"), s.source.get("dimension"))
        doc["name"] = s.name
    else:
        doc = {
            "document": "scenario",
            "schema_version": settings.schema_version,
            "name": s.name,
            "F": loop_function_to_spec(s.F),
            "G": loop_function_to_spec(s.G),
            "input": s.input.model_dump(exclude_none=True),
            "horizon": {"start": s.horizon.start, "length": len(s.horizon)},
            "seed": s.seed,
        }
    doc.update({"sigma": s.sigma, "sigma0": s.sigma0, "rho": s.rho, "n_width": s.n_width})
    if s.time_sequence is not None:
        doc["time_sequence"] = list(s.time_sequence)
    if s.max_gap is not None:
        doc["max_gap"] = s.max_gap
    return doc


def dump_scenario(s: Scenario, path: Union[str, Path], explicit: bool = True) -> Path:
    return write_json(path, scenario_to_document(s, explicit))
