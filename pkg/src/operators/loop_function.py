"""
FrozenTime - Loop Functions

Causal time-varying operators and their frozen-time snapshots.

The snapshot h_tau maps an input history to the output at tau with every
parameter as it is at tau: h_tau u = (Hu)(tau). Its frozen-time extension
H_tau applies h_tau at every time by shifting the input,
(H_tau u)(t) = h_tau T^{tau - t} u, and is time-invariant.

Linear kinds expose the taps of H_tau, i.e. (H_tau u)(t) = sum_k C_k u(t - k).
Every kind also exposes nonnegative majorant taps M_k with
|(h_tau u)| <= sum_k M_k |u(tau - k)| componentwise, and majorant taps of the
snapshot difference h_{tau-1} - h_tau. Norm bounds for nonlinear kinds are
built from these majorants.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np

from ..exceptions import DimensionError, DomainError, InputError
from ..signals import Signal, shift
from .schedules import MatrixSchedule

logger = logging.getLogger(__name__)

DEAD_ZONE_WIDTH = 0.5

Taps = List[np.ndarray]


class LoopKind(str, Enum):
    """Loop function kinds."""
    MEMORYLESS = "memoryless_matrix"
    ONE_STEP = "one_step_linear"
    DEAD_ZONE = "dead_zone_composite"
    COMPOSITION = "composition"
    TIME_INVARIANT = "time_invariant_wrapper"


def dead_zone(v, width: float = DEAD_ZONE_WIDTH) -> np.ndarray:
    """
    Componentwise dead-zone.

    v - w for v >= w, 0 for |v| < w, v + w for v <= -w.
    """
    v = np.asarray(v, dtype=float)
    return np.where(v >= width, v - width, np.where(v <= -width, v + width, 0.0))


def _pad(taps: Taps, length: int, rows: int, cols: int) -> Taps:
    return list(taps) + [np.zeros((rows, cols))] * (length - len(taps))


def _compose_taps(outer: Taps, inner_at, rows: int, cols: int) -> Taps:
    """Taps of outer applied to inner, where inner_at(j) gives inner taps at lag j of outer."""
    out: Taps = []
    for j, o in enumerate(outer):
        for k, c in enumerate(inner_at(j)):
            while len(out) <= j + k:
                out.append(np.zeros((rows, cols)))
            out[j + k] = out[j + k] + o @ c
    return out


class LoopFunction(ABC):
    """Causal time-varying operator description."""

    kind: LoopKind

    # -------------------------------------------------------------------------
    # Structure
    # -------------------------------------------------------------------------
    @property
    @abstractmethod
    def input_dim(self) -> int:
        ...

    @property
    @abstractmethod
    def output_dim(self) -> int:
        ...

    @property
    @abstractmethod
    def memory(self) -> int:
        """Largest input lag the output depends on."""

    @property
    def is_linear(self) -> bool:
        return True

    @property
    def is_time_invariant(self) -> bool:
        return False

    def linear_part(self) -> Optional["LoopFunction"]:
        """Linear loop function that this one is a componentwise contraction of."""
        return self

    # -------------------------------------------------------------------------
    # Evaluation
    # -------------------------------------------------------------------------
    @abstractmethod
    def snapshot(self, tau: int, u: Signal) -> np.ndarray:
        """h_tau u = (Hu)(tau)."""

    @abstractmethod
    def frozen_taps(self, tau: int) -> Optional[Taps]:
        """Taps of the frozen-time extension H_tau, or None for nonlinear kinds."""

    def majorant_taps(self, tau: int) -> Taps:
        """Nonnegative taps dominating |h_tau u| componentwise."""
        return [np.abs(c) for c in self.frozen_taps(tau)]

    def delta_majorant_taps(self, tau: int) -> Taps:
        """Nonnegative taps dominating |(h_{tau-1} - h_tau) u| componentwise."""
        before = self.frozen_taps(tau - 1)
        now = self.frozen_taps(tau)
        n = max(len(before), len(now))
        before = _pad(before, n, self.output_dim, self.input_dim)
        now = _pad(now, n, self.output_dim, self.input_dim)
        return [np.abs(b - c) for b, c in zip(before, now)]


@dataclass(frozen=True, eq=False)
class MemorylessMatrix(LoopFunction):
    """(Hu)(t) = A_t u(t)."""
    schedule: MatrixSchedule
    kind = LoopKind.MEMORYLESS

    @property
    def input_dim(self) -> int:
        return self.schedule.shape[1]

    @property
    def output_dim(self) -> int:
        return self.schedule.shape[0]

    @property
    def memory(self) -> int:
        return 0

    @property
    def is_time_invariant(self) -> bool:
        return self.schedule.is_constant

    def snapshot(self, tau: int, u: Signal) -> np.ndarray:
        return self.schedule.at(tau) @ u.at(tau)

    def frozen_taps(self, tau: int) -> Taps:
        return [self.schedule.at(tau)]


@dataclass(frozen=True, eq=False)
class OneStepLinear(LoopFunction):
    """(Hu)(t) = A_t u(t) + B_t u(t - 1)."""
    a: MatrixSchedule
    b: MatrixSchedule
    kind = LoopKind.ONE_STEP

    def __post_init__(self):
        if self.a.shape != self.b.shape:
            raise InputError(f"A and B schedules differ in shape: {self.a.shape} vs {self.b.shape}")

    @property
    def input_dim(self) -> int:
        return self.a.shape[1]

    @property
    def output_dim(self) -> int:
        return self.a.shape[0]

    @property
    def memory(self) -> int:
        return 1

    @property
    def is_time_invariant(self) -> bool:
        return self.a.is_constant and self.b.is_constant

    def snapshot(self, tau: int, u: Signal) -> np.ndarray:
        return self.a.at(tau) @ u.at(tau) + self.b.at(tau) @ u.at(tau - 1)

    def frozen_taps(self, tau: int) -> Taps:
        return [self.a.at(tau), self.b.at(tau)]


@dataclass(frozen=True, eq=False)
class DeadZoneComposite(LoopFunction):
    """(Hu)(t) = Phi((inner u)(t)) with the componentwise dead-zone Phi."""
    inner: LoopFunction
    width: float = DEAD_ZONE_WIDTH
    kind = LoopKind.DEAD_ZONE

    def __post_init__(self):
        if self.width < 0:
            raise InputError(f"Dead-zone width must be nonnegative, got {self.width}")

    @property
    def input_dim(self) -> int:
        return self.inner.input_dim

    @property
    def output_dim(self) -> int:
        return self.inner.output_dim

    @property
    def memory(self) -> int:
        return self.inner.memory

    @property
    def is_linear(self) -> bool:
        return False

    @property
    def is_time_invariant(self) -> bool:
        return self.inner.is_time_invariant

    def linear_part(self) -> Optional[LoopFunction]:
        return self.inner.linear_part()

    def snapshot(self, tau: int, u: Signal) -> np.ndarray:
        return dead_zone(self.inner.snapshot(tau, u), self.width)

    def frozen_taps(self, tau: int) -> None:
        return None

    # Phi is 1-Lipschitz componentwise with Phi(0) = 0
    def majorant_taps(self, tau: int) -> Taps:
        return self.inner.majorant_taps(tau)

    def delta_majorant_taps(self, tau: int) -> Taps:
        return self.inner.delta_majorant_taps(tau)


@dataclass(frozen=True, eq=False)
class Composition(LoopFunction):
    """(Hu) = outer(inner(u))."""
    outer: LoopFunction
    inner: LoopFunction
    kind = LoopKind.COMPOSITION

    def __post_init__(self):
        if self.outer.input_dim != self.inner.output_dim:
            raise DimensionError(
                f"Cannot compose: outer expects {self.outer.input_dim} inputs, "
                f"inner produces {self.inner.output_dim}"
            )

    @property
    def input_dim(self) -> int:
        return self.inner.input_dim

    @property
    def output_dim(self) -> int:
        return self.outer.output_dim

    @property
    def memory(self) -> int:
        return self.outer.memory + self.inner.memory

    @property
    def is_linear(self) -> bool:
        return self.outer.is_linear and self.inner.is_linear

    @property
    def is_time_invariant(self) -> bool:
        return self.outer.is_time_invariant and self.inner.is_time_invariant

    def linear_part(self) -> Optional[LoopFunction]:
        return self if self.is_linear else None

    def snapshot(self, tau: int, u: Signal) -> np.ndarray:
        first = tau - self.outer.memory
        v = np.stack([self.inner.snapshot(s, u) for s in range(first, tau + 1)])
        return self.outer.snapshot(tau, Signal._wrap(first, v))

    def frozen_taps(self, tau: int) -> Optional[Taps]:
        if not self.is_linear:
            return None
        return _compose_taps(
            self.outer.frozen_taps(tau),
            lambda j: self.inner.frozen_taps(tau - j),
            self.output_dim,
            self.input_dim,
        )

    def majorant_taps(self, tau: int) -> Taps:
        if self.is_linear:
            return super().majorant_taps(tau)
        return _compose_taps(
            self.outer.majorant_taps(tau),
            lambda j: self.inner.majorant_taps(tau - j),
            self.output_dim,
            self.input_dim,
        )

    def delta_majorant_taps(self, tau: int) -> Taps:
        if self.is_linear:
            return super().delta_majorant_taps(tau)
        # outer varies on the earlier inner output, then inner varies under the current outer
        first = _compose_taps(
            self.outer.delta_majorant_taps(tau),
            lambda j: self.inner.majorant_taps(tau - 1 - j),
            self.output_dim,
            self.input_dim,
        )
        second = _compose_taps(
            self.outer.majorant_taps(tau),
            lambda j: self.inner.delta_majorant_taps(tau - j),
            self.output_dim,
            self.input_dim,
        )
        n = max(len(first), len(second))
        first = _pad(first, n, self.output_dim, self.input_dim)
        second = _pad(second, n, self.output_dim, self.input_dim)
        return [a + b for a, b in zip(first, second)]


@dataclass(frozen=True, eq=False)
class TimeInvariantWrapper(LoopFunction):
    """The inner loop function with its parameters frozen at `frozen_at`, applied at all times."""
    inner: LoopFunction
    frozen_at: int = 0
    kind = LoopKind.TIME_INVARIANT

    @property
    def input_dim(self) -> int:
        return self.inner.input_dim

    @property
    def output_dim(self) -> int:
        return self.inner.output_dim

    @property
    def memory(self) -> int:
        return self.inner.memory

    @property
    def is_linear(self) -> bool:
        return self.inner.is_linear

    @property
    def is_time_invariant(self) -> bool:
        return True

    def linear_part(self) -> Optional[LoopFunction]:
        part = self.inner.linear_part()
        return None if part is None else TimeInvariantWrapper(part, self.frozen_at)

    def snapshot(self, tau: int, u: Signal) -> np.ndarray:
        return self.inner.snapshot(self.frozen_at, shift(u, self.frozen_at - tau))

    def frozen_taps(self, tau: int) -> Optional[Taps]:
        return self.inner.frozen_taps(self.frozen_at)

    def majorant_taps(self, tau: int) -> Taps:
        return self.inner.majorant_taps(self.frozen_at)

    def delta_majorant_taps(self, tau: int) -> Taps:
        return [np.zeros((self.output_dim, self.input_dim))]


# -----------------------------------------------------------------------------
# Operations
# -----------------------------------------------------------------------------

def _check_input(H: LoopFunction, u: Signal):
    if u.dimension != H.input_dim:
        raise DimensionError(f"Input has dimension {u.dimension}, system expects {H.input_dim}")


def apply(H: LoopFunction, u: Signal, horizon: range) -> Signal:
    """
    Evaluate y = Hu on the horizon.

    Args:
        H: Loop function
        u: Input signal
        horizon: Consecutive output times

    Returns:
        Output signal starting at horizon.start
    """
    _check_input(H, u)
    times = range(horizon.start, horizon.stop)
    if len(times) == 0:
        return Signal.zeros(H.output_dim, horizon.start)
    values = np.stack([H.snapshot(t, u) for t in times])
    return Signal._wrap(horizon.start, values)


def snapshot_apply(H: LoopFunction, tau: int, u: Signal) -> np.ndarray:
    """h_tau u = (Hu)(tau)."""
    _check_input(H, u)
    return H.snapshot(tau, u)


def frozen_extension_apply(H: LoopFunction, tau: int, u: Signal, t: int) -> np.ndarray:
    """(H_tau u)(t) = h_tau T^{tau - t} u."""
    _check_input(H, u)
    return H.snapshot(tau, shift(u, tau - t))


def apply_taps(taps: Taps, u: Signal, t: int) -> np.ndarray:
    """sum_k C_k u(t - k)."""
    return sum(c @ u.at(t - k) for k, c in enumerate(taps))


def nabla_extension_apply(H: LoopFunction, tau: int, u: Signal, t: int) -> np.ndarray:
    """
    (nabla H_tau u)(t) = (sum_{i=t+1}^{tau} nabla h_i) T^{tau - t} u.

    Linear kinds sum the parameter differences first; other kinds sum the
    snapshot differences evaluated on the shifted input.
    """
    _check_input(H, u)
    if t > tau:
        raise DomainError(f"nabla extension needs t <= tau, got t={t}, tau={tau}")
    if t == tau:
        return np.zeros(H.output_dim)

    if H.is_linear:
        width = 1 + H.memory
        total = [np.zeros((H.output_dim, H.input_dim)) for _ in range(width)]
        for i in range(t + 1, tau + 1):
            before = _pad(H.frozen_taps(i - 1), width, H.output_dim, H.input_dim)
            now = _pad(H.frozen_taps(i), width, H.output_dim, H.input_dim)
            total = [acc + (b - c) for acc, b, c in zip(total, before, now)]
        return apply_taps(total, u, t)

    out = np.zeros(H.output_dim)
    for i in range(t + 1, tau + 1):
        out = out + (frozen_extension_apply(H, i - 1, u, t) - frozen_extension_apply(H, i, u, t))
    return out
