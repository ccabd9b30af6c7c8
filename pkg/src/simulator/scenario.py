"""
FrozenTime - Scenarios

A feedback scenario x = Fu + G T x: the two loop functions, the input,
the horizon and the certificate parameters.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..config import settings
from ..exceptions import DimensionError, DomainError, InputError
from ..operators import LoopFunction
from ..signals import Signal

logger = logging.getLogger(__name__)


class InputSpec(BaseModel):
    """
    Closed-form or explicit input signal.

    exp_cos: u(t) = amplitude exp(t / growth) cos(t / period) (1, ..., 1),
        without the exponential when growth is None
    random: entries uniform in [-amplitude, amplitude], drawn from `seed`
    explicit: `values` (one row per time from `start_time`)
    """
    kind: Literal["exp_cos", "random", "explicit"] = "exp_cos"
    dimension: int = Field(default=1, ge=1)
    amplitude: float = 1.0
    growth: Optional[float] = Field(default=None, description="Time constant of exp(t / growth)")
    period: float = Field(default=2.0, gt=0.0, description="Divisor in cos(t / period)")
    seed: int = 0
    start_time: int = 0
    values: Optional[List[List[float]]] = None

    @model_validator(mode="after")
    def _explicit_values(self):
        if self.kind == "explicit":
            if not self.values:
                raise ValueError("explicit inputs need 'values'")
            widths = {len(row) for row in self.values}
            if widths != {self.dimension}:
                raise ValueError(f"explicit input rows must have {self.dimension} entries")
        return self

    @classmethod
    def from_signal(cls, u: Signal) -> "InputSpec":
        return cls(kind="explicit", dimension=u.dimension, start_time=u.start_time, values=u.values.tolist())

    def signal(self, horizon: range) -> Signal:
        """The input on the horizon (explicit inputs keep their own support)."""
        if self.kind == "explicit":
            return Signal(self.start_time, self.values, dimension=self.dimension)

        t = np.arange(horizon.start, horizon.stop, dtype=float)
        if self.kind == "random":
            rng = np.random.default_rng(self.seed)
            return Signal(horizon.start, rng.uniform(-self.amplitude, self.amplitude, (len(t), self.dimension)),
                          dimension=self.dimension)

        scalar = self.amplitude * np.cos(t / self.period)
        if self.growth is not None:
            scalar = scalar * np.exp(t / self.growth)
        return Signal(horizon.start, np.repeat(scalar[:, np.newaxis], self.dimension, axis=1),
                      dimension=self.dimension)


@dataclass(frozen=True, eq=False)
class Scenario:
    """
    Closed-loop experiment.

    Attributes:
        name: Label used for output directories
        F: Input loop function (n -> m)
        G: Feedback loop function (m -> m)
        input: Input specification
        horizon: Simulated times
        sigma, sigma0, rho: Certificate parameters
        seed: Seed everything random in the scenario was drawn from
        time_sequence: Optional fixed {t_i}
        n_width: Averaging width N
        max_gap: Longest window for proposed time sequences
        indicator: Destabilizing-episode flags per horizon time, if generated
        source: Generator reference the scenario was built from
    """
    name: str
    F: LoopFunction
    G: LoopFunction
    input: InputSpec
    horizon: range
    sigma: float = settings.sigma
    sigma0: float = settings.sigma0
    rho: float = settings.rho
    seed: int = 0
    time_sequence: Optional[List[int]] = None
    n_width: int = settings.n_width
    max_gap: Optional[int] = None
    indicator: Optional[np.ndarray] = None
    source: Optional[Dict[str, Any]] = field(default=None)

    def __post_init__(self):
        if len(self.horizon) == 0 or self.horizon.step != 1:
            raise InputError(f"Horizon must be a nonempty range with step 1, got {self.horizon}")
        if self.G.input_dim != self.G.output_dim:
            raise DimensionError(f"G must be square, got {self.G.output_dim}x{self.G.input_dim}")
        if self.F.output_dim != self.G.input_dim:
            raise DimensionError(f"F produces {self.F.output_dim} outputs, G expects {self.G.input_dim}")
        if self.input.dimension != self.F.input_dim:
            raise DimensionError(f"Input has dimension {self.input.dimension}, F expects {self.F.input_dim}")
        if not 1.0 <= self.sigma < self.sigma0:
            raise DomainError(f"Need 1 <= sigma < sigma0, got sigma={self.sigma}, sigma0={self.sigma0}")
        if not 0.0 < self.rho < 1.0:
            raise DomainError(f"rho must lie in (0, 1), got {self.rho}")
        if self.n_width < 1:
            raise DomainError(f"N must be a positive integer, got {self.n_width}")

    @property
    def dimension(self) -> int:
        return self.G.output_dim

    @property
    def bounds(self) -> Tuple[int, int]:
        return self.horizon.start, self.horizon.stop - 1

    def input_signal(self) -> Signal:
        return self.input.signal(self.horizon)
