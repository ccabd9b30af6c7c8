"""
FrozenTime - Variation Rates

Snapshot-difference norms ||nabla g_t||_{sigma inf}, their N-width averages,
and the coefficients c_{sigma,sigma0}(G, t) and c_{sigma,N}(G) that measure
how much time-variation a frozen-time stability margin can absorb.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from ..config import settings
from ..exceptions import DomainError, InputError
from ..operators import LoopFunction, NormEstimate, NormMethod, weighted_tap_norm
from ..signals import Signal, shift

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class VariationTrace:
    """
    Per-time values ||nabla g_t||_{sigma inf}, entry k at time start_time + k.

    Times outside the stored range have zero variation.
    """
    sigma: float
    start_time: int
    values: np.ndarray
    lower: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if not np.all(np.isfinite(values)):
            raise InputError("Variation trace values must be finite")
        if np.any(values < 0):
            raise InputError("Variation trace values must be nonnegative")
        if not self.sigma >= 1.0:
            raise DomainError(f"sigma must be >= 1, got {self.sigma}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "start_time", int(self.start_time))
        if self.lower is not None:
            lower = np.array(self.lower, dtype=float).reshape(-1)
            lower.setflags(write=False)
            object.__setattr__(self, "lower", lower)

    @property
    def length(self) -> int:
        return len(self.values)

    @property
    def end_time(self) -> int:
        return self.start_time + self.length - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.start_time, self.start_time + self.length)

    def at(self, t: int) -> float:
        k = t - self.start_time
        return float(self.values[k]) if 0 <= k < self.length else 0.0

    def window(self, t1: int, t2: int) -> np.ndarray:
        """Values on [t1, t2] with zero padding."""
        if t2 < t1:
            return np.zeros(0)
        return Signal._wrap(self.start_time, self.values[:, np.newaxis]).window(t1, t2)[:, 0]

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({"t": self.times, "value": self.values})
        if self.lower is not None:
            frame["lower"] = self.lower
        return frame


def _check_pair(sigma: float, sigma0: float):
    if not 1.0 <= sigma < sigma0:
        raise DomainError(f"Need 1 <= sigma < sigma0, got sigma={sigma}, sigma0={sigma0}")


def _check_width(N: int):
    if N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")


# -----------------------------------------------------------------------------
# Snapshot differences
# -----------------------------------------------------------------------------

def _random_delta_lower(
    H: LoopFunction,
    t: int,
    sigma: float,
    samples: int,
    rng: np.random.Generator
) -> float:
    """Sampled lower bound of ||nabla h_t||: |h_{t-1} T^{-1} u - h_t u| / ||u||_{sigma inf, t}."""
    depth = H.memory + 2
    weights = sigma ** np.arange(depth, dtype=float)[:, np.newaxis]
    best = 0.0
    for n in range(samples):
        v = rng.choice([-1.0, 1.0], size=(depth, H.input_dim))
        amplitude = 10.0 ** (n % 4)
        u = Signal._wrap(t - depth + 1, (amplitude * weights * v)[::-1])
        diff = H.snapshot(t - 1, shift(u, -1)) - H.snapshot(t, u)
        best = max(best, float(np.abs(diff).max()) / amplitude)
    return best


def snapshot_delta_norm(
    H: LoopFunction,
    t: int,
    sigma: float,
    rng: Optional[np.random.Generator] = None
) -> NormEstimate:
    """
    ||nabla h_t||_{sigma inf} with nabla h_t = h_{t-1} - h_t.

    Exact for linear kinds (weighted row sums of the tap differences);
    nonlinear kinds get the Lipschitz-dominated upper bound and a sampled
    lower bound.
    """
    if not sigma >= 1.0:
        raise DomainError(f"sigma must be >= 1, got {sigma}")
    if H.is_time_invariant:
        return NormEstimate.exact(0.0)

    upper = weighted_tap_norm(H.delta_majorant_taps(t), sigma)
    if H.is_linear:
        return NormEstimate.exact(upper)

    rng = rng if rng is not None else np.random.default_rng(t)
    lower = min(_random_delta_lower(H, t, sigma, settings.random_search_samples, rng), upper)
    return NormEstimate(lower, upper, NormMethod.LIPSCHITZ_BOUND)


def variation_trace(
    H: LoopFunction,
    horizon: range,
    sigma: float,
    with_lower: bool = False
) -> VariationTrace:
    """
    Upper bounds of ||nabla h_t||_{sigma inf} for every t in the horizon.

    Args:
        H: Loop function
        horizon: Consecutive times
        sigma: Weight
        with_lower: Also sample lower bounds for nonlinear kinds

    Returns:
        VariationTrace
    """
    uppers = []
    lowers = []
    for t in horizon:
        if with_lower:
            estimate = snapshot_delta_norm(H, t, sigma)
            uppers.append(estimate.upper)
            lowers.append(estimate.lower)
        elif H.is_time_invariant:
            uppers.append(0.0)
        else:
            uppers.append(weighted_tap_norm(H.delta_majorant_taps(t), sigma))
    return VariationTrace(sigma, horizon.start, np.array(uppers), np.array(lowers) if with_lower else None)


# -----------------------------------------------------------------------------
# Average rates and coefficients
# -----------------------------------------------------------------------------

def n_width_average(trace: VariationTrace, N: int, t: int) -> float:
    """d_{sigma,N}(t) = (1/N) sum_{i=t-N+1}^{t} ||nabla h_i||."""
    _check_width(N)
    return float(np.sum(trace.window(t - N + 1, t))) / N


def n_width_averages(trace: VariationTrace, N: int) -> np.ndarray:
    """d_{sigma,N}(t) for every t in the trace support."""
    _check_width(N)
    padded = np.concatenate([np.zeros(N), trace.values])
    sums = np.cumsum(padded)
    return (sums[N:] - sums[:-N]) / N


def sup_n_width(trace: VariationTrace, N: int) -> float:
    """d-bar_{sigma,N}: the largest N-width average over the support."""
    averages = n_width_averages(trace, N)
    return float(np.max(averages)) if len(averages) else 0.0


def c_sigma_sigma0(trace: VariationTrace, sigma0: float, t: int) -> float:
    """
    c_{sigma,sigma0}(G, t) = sup_{i >= 1} (sigma/sigma0)^i sum_{q=t-i+1}^{t} ||nabla g_q||.

    Past the start of the trace the partial sum stops growing while the
    geometric factor keeps shrinking, so the supremum is attained for
    i <= t - start_time + 1.
    """
    _check_pair(trace.sigma, sigma0)
    depth = t - trace.start_time + 1
    if depth < 1:
        return 0.0
    partial = np.cumsum(trace.window(trace.start_time, t)[::-1])
    factors = (trace.sigma / sigma0) ** np.arange(1, depth + 1, dtype=float)
    return float(np.max(factors * partial))


def c_coeff_trace(trace: VariationTrace, sigma0: float) -> np.ndarray:
    """c_{sigma,sigma0}(G, t) for every t in the trace support."""
    _check_pair(trace.sigma, sigma0)
    return np.array([c_sigma_sigma0(trace, sigma0, int(t)) for t in trace.times])


def c_sigma_N(d_bar: float, sigma: float, sigma0: float, N: int) -> float:
    """c_{sigma,N}(G) = (sigma0/sigma)^(N-1) d_bar / (e ln(sigma0/sigma))."""
    _check_pair(sigma, sigma0)
    _check_width(N)
    if d_bar < 0:
        raise DomainError(f"d_bar must be nonnegative, got {d_bar}")
    ratio = sigma0 / sigma
    return ratio ** (N - 1) * d_bar / (math.e * math.log(ratio))


def product_variation_bound(d_bar_G: float, K_norm: float) -> float:
    """Upper bound ||K||_{sigma inf} d-bar_{sigma,N}(G) on d-bar_{sigma,N}(GK)."""
    if d_bar_G < 0 or K_norm < 0:
        raise DomainError("Variation rate and norm must be nonnegative")
    return K_norm * d_bar_G


def prior_variation_rate(trace: VariationTrace) -> float:
    """d_sigma = sigma sup_t ||nabla h_t||_{sigma inf}, the worst-case per-step convention."""
    return trace.sigma * (float(np.max(trace.values)) if trace.length else 0.0)
