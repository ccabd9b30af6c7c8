"""
FrozenTime - Certificate Inputs

Per-time norm traces a certificate consumes, and their JSON document form.
"""

import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, BeforeValidator, Field, ValidationError

from ..config import settings
from ..exceptions import DomainError, InputError
from ..utils import write_json

logger = logging.getLogger(__name__)

INPUTS_DOCUMENT = "certificate_inputs"


def _trace(values, name: str, allow_inf: bool = True) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if np.any(np.isnan(arr)):
        raise InputError(f"{name} contains NaN")
    if np.any(arr < 0):
        raise InputError(f"{name} must be nonnegative")
    if not allow_inf and not np.all(np.isfinite(arr)):
        raise InputError(f"{name} must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CertificateInputs:
    """
    Everything the window conditions need, sampled on the horizon.

    Trace entry k belongs to time start_time + k.

    Attributes:
        sigma: Signal weight (>= 1)
        sigma0: Degree of stability (> sigma)
        rho: Contraction rate in (0, 1)
        F_norm: ||F||_inf over the whole horizon
        s_norm: ||s_t||_{inf,t}
        l_norm: ||l_t||_{sigma0 inf,t}, +inf at destabilizing times
        g_norm: ||g_t||_{sigma inf,t}
        c_coeff: c_{sigma,sigma0}(G, t)
        stabilizing: Frozen classification per time
        s_norm_sigma: ||s_t||_{sigma inf,t}, used by the all-time gain bound
        variation: Upper bounds of ||nabla g_t||_{sigma inf}
        time_sequence: Optional fixed {t_i}
    """
    sigma: float
    sigma0: float
    rho: float
    F_norm: float
    s_norm: np.ndarray
    l_norm: np.ndarray
    g_norm: np.ndarray
    c_coeff: np.ndarray
    stabilizing: np.ndarray
    start_time: int = 0
    s_norm_sigma: Optional[np.ndarray] = None
    variation: Optional[np.ndarray] = None
    time_sequence: Optional[List[int]] = None

    def __post_init__(self):
        if not 1.0 <= self.sigma < self.sigma0:
            raise DomainError(f"Need 1 <= sigma < sigma0, got sigma={self.sigma}, sigma0={self.sigma0}")
        if not 0.0 < self.rho < 1.0:
            raise DomainError(f"rho must lie in (0, 1), got {self.rho}")
        if not (np.isfinite(self.F_norm) and self.F_norm >= 0):
            raise InputError(f"F_norm must be finite and nonnegative, got {self.F_norm}")

        set_ = lambda name, value: object.__setattr__(self, name, value)
        set_("start_time", int(self.start_time))
        set_("s_norm", _trace(self.s_norm, "s_norm"))
        set_("l_norm", _trace(self.l_norm, "l_norm"))
        set_("g_norm", _trace(self.g_norm, "g_norm"))
        set_("c_coeff", _trace(self.c_coeff, "c_coeff", allow_inf=False))
        flags = np.array(self.stabilizing, dtype=bool).reshape(-1)
        flags.setflags(write=False)
        set_("stabilizing", flags)
        if self.s_norm_sigma is not None:
            set_("s_norm_sigma", _trace(self.s_norm_sigma, "s_norm_sigma"))
        if self.variation is not None:
            set_("variation", _trace(self.variation, "variation", allow_inf=False))

        n = len(self.s_norm)
        for name in ("l_norm", "g_norm", "c_coeff", "stabilizing", "s_norm_sigma", "variation"):
            value = getattr(self, name)
            if value is not None and len(value) != n:
                raise InputError(f"{name} has {len(value)} entries, s_norm has {n}")

        if self.time_sequence is not None:
            times = [int(t) for t in self.time_sequence]
            if any(b <= a for a, b in zip(times, times[1:])):
                raise InputError("time_sequence must be strictly increasing")
            if times and (times[0] < self.start_time - 1 or times[-1] > self.end_time):
                raise InputError(
                    f"time_sequence must lie in [{self.start_time - 1}, {self.end_time}]"
                )
            set_("time_sequence", times)

    @property
    def length(self) -> int:
        return len(self.s_norm)

    @property
    def end_time(self) -> int:
        return self.start_time + self.length - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.start_time, self.start_time + self.length)

    @property
    def all_stabilizing(self) -> bool:
        return bool(np.all(self.stabilizing))

    def index(self, t: int) -> int:
        k = t - self.start_time
        if not 0 <= k < self.length:
            raise DomainError(f"t={t} outside the horizon [{self.start_time}, {self.end_time}]")
        return k


# -----------------------------------------------------------------------------
# JSON document
# -----------------------------------------------------------------------------

def _parse_real(value: Any) -> Any:
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            return value
    return value


Real = Annotated[float, BeforeValidator(_parse_real)]


class CertificateInputsDocument(BaseModel):
    """On-disk form of CertificateInputs; "inf" strings stand for +infinity."""
    document: Literal["certificate_inputs"] = INPUTS_DOCUMENT
    schema_version: int = Field(default_factory=lambda: settings.schema_version)
    sigma: float
    sigma0: float
    rho: float
    F_norm: float
    start_time: int = 0
    time_sequence: Optional[List[int]] = None
    s_norm: List[Real]
    l_norm: List[Real]
    g_norm: List[Real]
    c_coeff: List[float]
    stabilizing: List[bool]
    s_norm_sigma: Optional[List[Real]] = None
    variation: Optional[List[float]] = None


def inputs_from_document(data: Dict[str, Any]) -> CertificateInputs:
    """Validate a certificate-inputs document and build the inputs."""
    try:
        doc = CertificateInputsDocument.model_validate(data)
    except ValidationError as e:
        raise InputError(f"Invalid certificate inputs: {e}") from e
    if doc.schema_version != settings.schema_version:
        raise InputError(
            f"Unsupported schema_version {doc.schema_version} (expected {settings.schema_version})"
        )
    return CertificateInputs(
        sigma=doc.sigma,
        sigma0=doc.sigma0,
        rho=doc.rho,
        F_norm=doc.F_norm,
        s_norm=doc.s_norm,
        l_norm=doc.l_norm,
        g_norm=doc.g_norm,
        c_coeff=doc.c_coeff,
        stabilizing=doc.stabilizing,
        start_time=doc.start_time,
        s_norm_sigma=doc.s_norm_sigma,
        variation=doc.variation,
        time_sequence=doc.time_sequence,
    )


def inputs_to_document(inputs: CertificateInputs) -> Dict[str, Any]:
    """Plain dict form of the inputs (arrays as lists)."""
    optional = lambda arr: None if arr is None else arr.tolist()
    return {
        "document": INPUTS_DOCUMENT,
        "schema_version": settings.schema_version,
        "sigma": inputs.sigma,
        "sigma0": inputs.sigma0,
        "rho": inputs.rho,
        "F_norm": inputs.F_norm,
        "start_time": inputs.start_time,
        "time_sequence": inputs.time_sequence,
        "s_norm": inputs.s_norm.tolist(),
        "l_norm": inputs.l_norm.tolist(),
        "g_norm": inputs.g_norm.tolist(),
        "c_coeff": inputs.c_coeff.tolist(),
        "stabilizing": inputs.stabilizing.tolist(),
        "s_norm_sigma": optional(inputs.s_norm_sigma),
        "variation": optional(inputs.variation),
    }


def load_certificate_inputs(path: Union[str, Path]) -> CertificateInputs:
    """Read a certificate-inputs JSON file."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise InputError(f"File not found: {path}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"Malformed JSON in {path}: {e}") from e
    return inputs_from_document(data)


def dump_certificate_inputs(inputs: CertificateInputs, path: Union[str, Path]) -> Path:
    """Write a certificate-inputs JSON file atomically."""
    return write_json(path, inputs_to_document(inputs))


def with_time_sequence(inputs: CertificateInputs, times: Optional[Sequence[int]]) -> CertificateInputs:
    """Copy of the inputs with another fixed time sequence."""
    return replace(inputs, time_sequence=None if times is None else list(times))
