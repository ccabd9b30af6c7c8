"""
FrozenTime - Discrete-Time Signals

Finite vector traces with implicit zero extension on both sides, the
moving-window fading-memory norms, and the shift and truncation operators.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..exceptions import DomainError, InputError

logger = logging.getLogger(__name__)

INFINITY = math.inf
VECTOR_NORMS = ("euclidean", "max")


class Signal:
    """
    Immutable finite trace x(start_time), ..., x(end_time) of real vectors.

    Values outside the stored range are the zero vector, which models zero
    initial conditions before start_time.
    """

    __slots__ = ("start_time", "_values")

    def __init__(
        self,
        start_time: int,
        values,
        dimension: Optional[int] = None
    ):
        """
        Build a signal.

        Args:
            start_time: Time index of the first stored value
            values: Array-like of shape (length, n); a 1-D array is a scalar signal
            dimension: Required when values is empty
        """
        arr = np.array(values, dtype=float)
        if arr.size == 0:
            if dimension is None:
                raise InputError("An empty signal needs an explicit dimension")
            arr = np.zeros((0, int(dimension)))
        elif arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise InputError(f"Signal values must be a (length, n) array, got shape {arr.shape}")
        if dimension is not None and arr.shape[1] != dimension:
            raise InputError(f"Signal has dimension {arr.shape[1]}, expected {dimension}")
        if not np.all(np.isfinite(arr)):
            raise InputError("Signal values must be finite")

        arr.setflags(write=False)
        self.start_time = int(start_time)
        self._values = arr

    @classmethod
    def _wrap(cls, start_time: int, values: np.ndarray) -> "Signal":
        """Wrap an already validated (length, n) float array without copying."""
        obj = cls.__new__(cls)
        obj.start_time = int(start_time)
        obj._values = values
        return obj

    @classmethod
    def zeros(cls, dimension: int, start_time: int = 0) -> "Signal":
        """The zero signal."""
        return cls(start_time, [], dimension=dimension)

    # -------------------------------------------------------------------------
    # Accessors
    # -------------------------------------------------------------------------
    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def dimension(self) -> int:
        return self._values.shape[1]

    @property
    def length(self) -> int:
        return self._values.shape[0]

    @property
    def end_time(self) -> int:
        """Last stored time (start_time - 1 for an empty signal)."""
        return self.start_time + self.length - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.start_time, self.start_time + self.length)

    def at(self, t: int) -> np.ndarray:
        """Value at time t (zero outside the stored range)."""
        k = t - self.start_time
        if 0 <= k < self.length:
            return self._values[k]
        return np.zeros(self.dimension)

    def __call__(self, t: int) -> np.ndarray:
        return self.at(t)

    def window(self, t1: int, t2: int) -> np.ndarray:
        """Values on [t1, t2] as a (t2 - t1 + 1, n) array with zero padding."""
        if t2 < t1:
            return np.zeros((0, self.dimension))
        out = np.zeros((t2 - t1 + 1, self.dimension))
        lo = max(t1, self.start_time)
        hi = min(t2, self.end_time)
        if lo <= hi:
            out[lo - t1:hi - t1 + 1] = self._values[lo - self.start_time:hi - self.start_time + 1]
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        if self.dimension != other.dimension:
            return False
        if self.length == 0 and other.length == 0:
            return True
        lo = min(self.start_time, other.start_time)
        hi = max(self.end_time, other.end_time)
        return bool(np.array_equal(self.window(lo, hi), other.window(lo, hi)))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Signal(start_time={self.start_time}, length={self.length}, dimension={self.dimension})"


@dataclass(frozen=True)
class WeightSpec:
    """Weight sigma and exponent p of the moving-window fading-memory norm."""
    sigma: float = 1.0
    p: float = INFINITY
    vector_norm: str = "euclidean"

    def __post_init__(self):
        if not self.sigma >= 1.0:
            raise DomainError(f"sigma must be >= 1, got {self.sigma}")
        if not self.p >= 1.0:
            raise DomainError(f"p must be >= 1, got {self.p}")
        if self.vector_norm not in VECTOR_NORMS:
            raise DomainError(f"vector_norm must be one of {VECTOR_NORMS}, got {self.vector_norm!r}")

    @property
    def is_sup(self) -> bool:
        return math.isinf(self.p)


def magnitudes(values: np.ndarray, vector_norm: str = "euclidean") -> np.ndarray:
    """Pointwise |x(t)| of a (length, n) array."""
    if values.shape[0] == 0:
        return np.zeros(0)
    if vector_norm == "max":
        return np.max(np.abs(values), axis=1)
    return np.linalg.norm(values, axis=1)


def weighted_norm(
    x: Signal,
    w: WeightSpec,
    t1: Optional[int] = None,
    t2: Optional[int] = None
) -> float:
    """
    Moving-window fading-memory norm ||x||_{sigma p} over [t1, t2].

    Args:
        x: Signal
        w: Weight and exponent
        t1: Window start; None means the start of the support (minus infinity)
        t2: Window end; None means the end of the support

    Returns:
        The weighted norm (0 for a window without stored values)
    """
    if t1 is None:
        t1 = x.start_time
    if t2 is None:
        t2 = x.end_time
    if t1 > t2:
        raise DomainError(f"Empty window: t1={t1} > t2={t2}")

    lo = max(t1, x.start_time)
    hi = min(t2, x.end_time)
    if lo > hi:
        return 0.0

    block = x.values[lo - x.start_time:hi - x.start_time + 1]
    if not np.all(np.isfinite(block)):
        raise InputError("Signal values must be finite")
    mags = magnitudes(block, w.vector_norm)
    lags = t2 - np.arange(lo, hi + 1)
    weighted = mags * np.power(w.sigma, -lags.astype(float))

    if w.is_sup:
        return float(np.max(weighted))
    return float(np.sum(weighted ** w.p) ** (1.0 / w.p))


def running_weighted_norm(x: Signal, w: WeightSpec) -> np.ndarray:
    """
    ||x||_{sigma p, t} (window from the start of the support) for every stored t.

    The p = infinity branch uses the one-step recursion
    ||x||_t = max(||x||_{t-1} / sigma, |x(t)|).
    """
    mags = magnitudes(x.values, w.vector_norm)
    out = np.empty(len(mags))
    acc = 0.0
    if w.is_sup:
        for k, m in enumerate(mags):
            acc = max(acc / w.sigma, m)
            out[k] = acc
        return out

    decay = w.sigma ** (-w.p)
    for k, m in enumerate(mags):
        acc = acc * decay + m ** w.p
        out[k] = acc ** (1.0 / w.p)
    return out


def shift(x: Signal, theta: int) -> Signal:
    """Backward shift: (T^theta x)(t) = x(t - theta)."""
    return Signal._wrap(x.start_time + int(theta), x.values)


def truncate(x: Signal, tau: int) -> Signal:
    """Truncation: x(t) for t <= tau, zero after."""
    keep = min(x.length, max(0, tau - x.start_time + 1))
    if keep == x.length:
        return x
    return Signal._wrap(x.start_time, x.values[:keep])


def sup_norm_trace(x: Signal, vector_norm: str = "max") -> np.ndarray:
    """Running ||x||_{inf, t} = max_{s <= t} |x(s)| over the support."""
    return np.maximum.accumulate(magnitudes(x.values, vector_norm)) if x.length else np.zeros(0)


def as_signal(value: Union[Signal, np.ndarray, list], start_time: int = 0) -> Signal:
    """Coerce array-like data into a Signal."""
    if isinstance(value, Signal):
        return value
    return Signal(start_time, value)
