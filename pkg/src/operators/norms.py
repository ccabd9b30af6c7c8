"""
FrozenTime - Induced Norms

Induced sigma-weighted norms ||h_tau||_{sigma inf} of frozen snapshots,
spectral radii, and random-search lower bounds.

Pointwise magnitudes are measured with the max vector norm, for which the
weighted row-sum formula below is the exact induced norm of a linear
snapshot: ||h_tau|| = max_r sum_k sigma^k sum_j |C_k[r, j]|.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np
from scipy import linalg

from ..config import settings
from ..exceptions import DomainError, InputError
from ..signals import Signal, WeightSpec, running_weighted_norm
from .loop_function import LoopFunction, Taps, apply

logger = logging.getLogger(__name__)

INFINITY = math.inf


class NormMethod(str, Enum):
    """How a norm estimate was obtained."""
    EXACT_ROWSUM = "exact_rowsum"
    IMPULSE_TRUNCATION = "impulse_truncation"
    RANDOM_SEARCH = "random_search"
    LIPSCHITZ_BOUND = "lipschitz_bound"


@dataclass(frozen=True)
class NormEstimate:
    """Two-sided estimate of an induced norm."""
    lower: float
    upper: float
    method: NormMethod

    def __post_init__(self):
        if self.lower < 0 or self.upper < 0:
            raise DomainError(f"Norm bounds must be nonnegative: [{self.lower}, {self.upper}]")
        if self.lower > self.upper:
            # rounding between the two computations
            if self.lower - self.upper <= 1e-12 * max(1.0, self.upper):
                object.__setattr__(self, "lower", self.upper)
            else:
                raise DomainError(f"Norm lower bound {self.lower} exceeds upper bound {self.upper}")

    @classmethod
    def exact(cls, value: float, method: NormMethod = NormMethod.EXACT_ROWSUM) -> "NormEstimate":
        return cls(float(value), float(value), method)

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.upper)


def _check_sigma(sigma: float):
    if not sigma >= 1.0:
        raise DomainError(f"sigma must be >= 1, got {sigma}")


def weighted_tap_norm(taps: Sequence[np.ndarray], sigma: float, first_lag: int = 0) -> float:
    """max_r sum_k sigma^(first_lag + k) * sum_j |C_k[r, j]|."""
    rows = None
    for k, c in enumerate(taps):
        term = (sigma ** (first_lag + k)) * np.abs(c).sum(axis=1)
        rows = term if rows is None else rows + term
    return 0.0 if rows is None or rows.size == 0 else float(np.max(rows))


def spectral_radius(M) -> float:
    """
    Largest eigenvalue modulus.

    Eigenvalues closer than the backward-error radius of a defective
    eigenvalue are merged and represented by their mean, which is computed
    to working precision even when the individual eigenvalues are not.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"spectral_radius needs a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError("Matrix entries must be finite")
    if M.size == 0:
        return 0.0

    eig = linalg.eigvals(M)
    scale = max(np.linalg.norm(M), np.finfo(float).tiny)
    radius = 64.0 * math.sqrt(np.finfo(float).eps) * scale

    labels = list(range(len(eig)))
    for i in range(len(eig)):
        for j in range(i):
            if abs(eig[i] - eig[j]) <= radius:
                old, new = labels[i], labels[j]
                labels = [new if lab == old else lab for lab in labels]

    best = 0.0
    for lab in set(labels):
        members = eig[[k for k, other in enumerate(labels) if other == lab]]
        best = max(best, float(abs(np.mean(members))))
    return best


# -----------------------------------------------------------------------------
# Companion realizations (frozen closed loops)
# -----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CompanionSystem:
    """
    Time-invariant linear system with impulse taps P M^k E for k >= first_lag.

    P selects the first block row and E the first block column, each of
    size `block`.
    """
    matrix: np.ndarray
    block: int
    first_lag: int = 0

    @property
    def radius(self) -> float:
        return spectral_radius(self.matrix)

    def taps(self, count: int) -> Taps:
        """The first `count` impulse taps (lags 0 .. count-1)."""
        out: Taps = []
        power = np.eye(self.matrix.shape[0])
        for k in range(count):
            coef = power[:self.block, :self.block].copy()
            out.append(coef if k >= self.first_lag else np.zeros_like(coef))
            power = power @ self.matrix
        return out


def companion_impulse_norm(
    system: CompanionSystem,
    sigma: float,
    tol: Optional[float] = None,
    max_lags: Optional[int] = None
) -> NormEstimate:
    """
    Weighted impulse-response norm with a certified geometric tail bound.

    Once sigma^q ||M^q|| <= theta < 1 for some q, every later block of q taps
    is at most theta times the previous block, so the remainder after n blocks
    is bounded by theta^n / (1 - theta) times the first block.
    """
    _check_sigma(sigma)
    tol = settings.norm_tolerance if tol is None else tol
    max_lags = settings.max_impulse_lags if max_lags is None else max_lags
    m = system.block
    scaled = sigma * system.matrix

    rho = system.radius
    if sigma * rho >= 1.0:
        lower = weighted_tap_norm(system.taps(system.first_lag + 1), sigma)
        logger.debug(f"sigma*rho = {sigma * rho:.6g} >= 1, norm unbounded")
        return NormEstimate(lower, INFINITY, NormMethod.IMPULSE_TRUNCATION)

    power = np.eye(scaled.shape[0])
    rows = np.zeros(m)
    head = []
    q = None
    theta = None
    block_sum = None
    for k in range(max_lags + 1):
        if k >= system.first_lag:
            rows = rows + np.abs(power[:m, :m]).sum(axis=1)
        if q is None:
            head.append(float(np.abs(power[:m, :]).sum(axis=1).max()))
            if k >= 1:
                contraction = float(np.abs(power).sum(axis=1).max())
                if contraction <= 0.5:
                    q, theta = k, contraction
                    block_sum = sum(head[:q])
        if q is not None and (k + 1) % q == 0:
            tail = block_sum * theta ** ((k + 1) // q) / (1.0 - theta)
            if tail <= tol:
                lower = float(rows.max())
                return NormEstimate(lower, lower + tail, NormMethod.IMPULSE_TRUNCATION)
        power = power @ scaled

    logger.warning(f"No certified tail bound within {max_lags} lags (sigma*rho = {sigma * rho:.6g})")
    return NormEstimate(float(rows.max()), INFINITY, NormMethod.IMPULSE_TRUNCATION)


# -----------------------------------------------------------------------------
# Snapshot norms
# -----------------------------------------------------------------------------

def random_search_norm(
    H: LoopFunction,
    tau: int,
    sigma: float,
    samples: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    amplitudes: Sequence[float] = (1.0, 10.0, 100.0, 1000.0)
) -> float:
    """
    Lower bound of ||h_tau||_{sigma inf} from sampled input histories.

    Inputs are scaled so that |u(tau - k)| <= a sigma^k, which puts every lag
    on the boundary of the weighted unit ball of radius a. Nonlinear kinds are
    not homogeneous, so several amplitudes a are tried.
    """
    _check_sigma(sigma)
    samples = samples or settings.random_search_samples
    rng = rng if rng is not None else np.random.default_rng(0)
    depth = H.memory + 1
    weights = sigma ** np.arange(depth, dtype=float)[:, np.newaxis]

    best = 0.0
    for n in range(samples):
        if n % 2 == 0:
            v = rng.choice([-1.0, 1.0], size=(depth, H.input_dim))
        else:
            v = rng.uniform(-1.0, 1.0, size=(depth, H.input_dim))
        scale = float(np.abs(v).max())
        if scale == 0.0:
            continue
        amplitude = amplitudes[n % len(amplitudes)]
        history = (amplitude * weights * v)[::-1]
        u = Signal._wrap(tau - depth + 1, history)
        y = H.snapshot(tau, u)
        best = max(best, float(np.abs(y).max()) / (amplitude * scale))
    return best


def induced_norm_frozen(
    H: Union[LoopFunction, CompanionSystem],
    tau: int,
    sigma: float,
    tol: Optional[float] = None,
    rng: Optional[np.random.Generator] = None
) -> NormEstimate:
    """
    ||h_tau||_{sigma inf}.

    Args:
        H: Loop function, or a companion realization of a frozen closed loop
        tau: Frozen time (ignored for companion systems)
        sigma: Weight (>= 1)
        tol: Tail tolerance for companion systems
        rng: Random generator for lower bounds of nonlinear kinds

    Returns:
        NormEstimate; exact for linear loop functions
    """
    _check_sigma(sigma)
    if isinstance(H, CompanionSystem):
        return companion_impulse_norm(H, sigma, tol)

    taps = H.frozen_taps(tau)
    if taps is not None:
        return NormEstimate.exact(weighted_tap_norm(taps, sigma))

    upper = weighted_tap_norm(H.majorant_taps(tau), sigma)
    lower = min(random_search_norm(H, tau, sigma, rng=rng), upper)
    return NormEstimate(lower, upper, NormMethod.LIPSCHITZ_BOUND)


def horizon_induced_norm(
    H: LoopFunction,
    horizon: range,
    sigma: float,
    samples: Optional[int] = None,
    rng: Optional[np.random.Generator] = None
) -> float:
    """
    Sampled lower bound of sup_t ||Hu||_{sigma inf, t} / ||u||_{sigma inf, t} over the horizon.

    Inputs are random sign sequences supported on the horizon.
    """
    _check_sigma(sigma)
    samples = samples or settings.random_search_samples
    rng = rng if rng is not None else np.random.default_rng(0)
    w = WeightSpec(sigma=sigma, vector_norm="max")
    length = len(horizon)

    best = 0.0
    for _ in range(samples):
        u = Signal._wrap(horizon.start, rng.choice([-1.0, 1.0], size=(length, H.input_dim)))
        y = apply(H, u, horizon)
        u_norm = running_weighted_norm(u, w)
        y_norm = running_weighted_norm(y, w)
        best = max(best, float(np.max(y_norm / u_norm)))
    return best
