"""
FrozenTime - Frozen Closed Loops

Frozen-time closed loops of x = f + G_tau T x: the sensitivity
s_tau = (I - G_tau T)^{-1} and the loop part l_tau = (I - G_tau T)^{-1} G_tau T,
their companion realizations, stability classification, and norms.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

import numpy as np

from ..config import settings
from ..exceptions import DimensionError, DomainError, UnclassifiableError
from .loop_function import LoopFunction, Taps
from .norms import CompanionSystem, NormEstimate, NormMethod, induced_norm_frozen, spectral_radius

logger = logging.getLogger(__name__)


class FrozenClass(str, Enum):
    """Frozen-time classification of G_tau."""
    STABILIZING = "stabilizing"
    DESTABILIZING = "destabilizing"


def companion_matrix(taps: Taps) -> np.ndarray:
    """
    Block companion matrix of x(s) = f(s) + sum_k C_k x(s - 1 - k).

    The state is (x(s), x(s-1), ..., x(s-K+1)).
    """
    m = taps[0].shape[0]
    K = len(taps)
    M = np.zeros((m * K, m * K))
    for k, c in enumerate(taps):
        M[:m, k * m:(k + 1) * m] = c
    for k in range(1, K):
        M[k * m:(k + 1) * m, (k - 1) * m:k * m] = np.eye(m)
    return M


@dataclass(frozen=True, eq=False)
class FrozenClosedLoop:
    """Companion realization of the loop frozen at `frozen_time`."""
    frozen_time: int
    matrix: np.ndarray
    block: int
    via_majorant: bool = False

    @property
    def radius(self) -> float:
        return spectral_radius(self.matrix)

    @property
    def sensitivity(self) -> CompanionSystem:
        """s_tau, taps S_k = P M^k E for k >= 0."""
        return CompanionSystem(self.matrix, self.block, first_lag=0)

    @property
    def loop_gain(self) -> CompanionSystem:
        """l_tau, the same taps without the identity at lag 0."""
        return CompanionSystem(self.matrix, self.block, first_lag=1)


def _loop_taps(G: LoopFunction, tau: int, use_majorant: bool) -> Taps:
    if G.input_dim != G.output_dim:
        raise DimensionError(f"Feedback loop needs a square G, got {G.output_dim}x{G.input_dim}")
    if use_majorant:
        return G.majorant_taps(tau)
    part = G.linear_part()
    if part is None:
        raise UnclassifiableError(f"{G.kind.value} at t={tau} has no linear companion form")
    return part.frozen_taps(tau)


def frozen_closed_loop(G: LoopFunction, tau: int, use_majorant: Optional[bool] = None) -> FrozenClosedLoop:
    """
    Companion realization of the frozen loop at tau.

    Args:
        G: Loop function in the feedback path
        tau: Frozen time
        use_majorant: Realize the nonnegative majorant of G instead of its
            linear part; defaults to True exactly for nonlinear G, whose norms
            are only bounded by the majorant loop

    Returns:
        FrozenClosedLoop
    """
    if use_majorant is None:
        use_majorant = not G.is_linear
    taps = _loop_taps(G, tau, use_majorant)
    return FrozenClosedLoop(tau, companion_matrix(taps), G.output_dim, via_majorant=use_majorant)


def classify_frozen(G: LoopFunction, tau: int, sigma0: float, margin: Optional[float] = None) -> FrozenClass:
    """
    Stabilizing iff the frozen closed loop has all poles inside radius 1/sigma0.

    Nonlinear G is classified through its linear part. Borderline loops
    within `margin` of the circle are destabilizing.
    """
    if not sigma0 >= 1.0:
        raise DomainError(f"sigma0 must be >= 1, got {sigma0}")
    margin = settings.stability_margin if margin is None else margin
    loop = frozen_closed_loop(G, tau, use_majorant=False)
    radius = loop.radius
    if radius < 1.0 / sigma0 - margin:
        return FrozenClass.STABILIZING
    logger.debug(f"Frozen loop at t={tau} destabilizing: pole radius {radius:.6g} >= {1.0 / sigma0:.6g}")
    return FrozenClass.DESTABILIZING


@dataclass(frozen=True)
class ClosedLoopNorms:
    """
    Frozen closed-loop norms at one time.

    Unpacks as (s_norm, l_norm); s_norm_sigma is the sensitivity norm at the
    signal weight sigma.
    """
    s_norm: NormEstimate
    l_norm: NormEstimate
    s_norm_sigma: NormEstimate
    classification: FrozenClass

    def __iter__(self) -> Iterator[NormEstimate]:
        yield self.s_norm
        yield self.l_norm


def closed_loop_frozen_norms(
    G: LoopFunction,
    tau: int,
    sigma: float,
    sigma0: float,
    tol: Optional[float] = None
) -> ClosedLoopNorms:
    """
    ||s_tau||_{inf} (sigma = 1), ||l_tau||_{sigma0 inf}, and ||s_tau||_{sigma inf}.

    Destabilizing loops report l_norm.upper = +inf.
    """
    if not sigma < sigma0:
        raise DomainError(f"Need sigma < sigma0, got sigma={sigma}, sigma0={sigma0}")
    classification = classify_frozen(G, tau, sigma0)
    loop = frozen_closed_loop(G, tau)

    s_norm = induced_norm_frozen(loop.sensitivity, tau, 1.0, tol)
    s_norm_sigma = induced_norm_frozen(loop.sensitivity, tau, sigma, tol)
    if classification is FrozenClass.DESTABILIZING:
        l_norm = NormEstimate(0.0, math.inf, NormMethod.IMPULSE_TRUNCATION)
    else:
        l_norm = induced_norm_frozen(loop.loop_gain, tau, sigma0, tol)
        if loop.via_majorant and not l_norm.is_finite:
            logger.warning(f"Majorant loop at t={tau} is unbounded at sigma0={sigma0}; l_norm is +inf")

    return ClosedLoopNorms(s_norm, l_norm, s_norm_sigma, classification)
