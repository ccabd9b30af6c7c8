"""
FrozenTime - Tolerable Variation Bounds

Closed-form limits on how fast G may vary when every frozen loop is
stabilizing, the worst-case per-step baseline they generalize, and the
adaptive-control plant bound.
"""

import logging
import math
from typing import Any, Dict, Optional

import numpy as np

from ..config import settings
from ..exceptions import DomainError
from ..variation import VariationTrace

logger = logging.getLogger(__name__)


def _check(sup_l_norm: float, sigma: float, sigma0: float, rho: float):
    if not 1.0 <= sigma < sigma0:
        raise DomainError(f"Need 1 <= sigma < sigma0, got sigma={sigma}, sigma0={sigma0}")
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (0, 1), got {rho}")
    if not sup_l_norm >= 0:
        raise DomainError(f"sup ||l_t|| must be nonnegative, got {sup_l_norm}")


def zames_wang_bound(sup_l_norm: float, sigma: float, sigma0: float, rho: float) -> float:
    """
    Worst-case per-step bound e ln(sigma0/sigma) rho / sup_t ||l_t||_{sigma0 inf}.

    An unbounded sup ||l_t|| (some frozen loop destabilizing) tolerates no
    variation at all: the bound is 0. With no loop (sup ||l_t|| = 0) every
    variation is tolerated: the bound is inf.
    """
    _check(sup_l_norm, sigma, sigma0, rho)
    if math.isinf(sup_l_norm):
        return 0.0
    if sup_l_norm == 0:
        return math.inf
    return math.e * math.log(sigma0 / sigma) * rho / sup_l_norm


def tolerable_variation_bound(sup_l_norm: float, sigma: float, sigma0: float, rho: float, N: int) -> float:
    """
    d-bar-bar_{sigma,N}(G) = (sigma0/sigma)^(1-N) e ln(sigma0/sigma) rho / sup_t ||l_t||.

    Measured d-bar_{sigma,N}(G) at or below this value certifies the gain
    bound c-bar. N = 1 is the per-step bound exactly.
    """
    if N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    return zames_wang_bound(sup_l_norm, sigma, sigma0, rho) * (sigma0 / sigma) ** (1 - N)


def adaptive_plant_bound(
    controller_factor_norm: float,
    sup_l_lambda: float,
    sigma: float,
    lam: float,
    rho: float,
    N: int
) -> float:
    """
    Tolerable plant variation rate d-bar_{sigma,N}(P) for an adaptive loop.

    Args:
        controller_factor_norm: max_i ||[I - D_i^u, -N_i^y]||_{sigma inf}
        sup_l_lambda: sup_t ||l_t||_{lambda inf} of the frozen closed loops
        sigma: Signal weight
        lam: Degree of stability lambda > sigma of the frozen loops
        rho: Contraction rate
        N: Averaging width

    Returns:
        tolerable_variation_bound(sup_l_lambda, sigma, lam, rho, N) / controller_factor_norm
    """
    if not controller_factor_norm > 0:
        raise DomainError(f"Controller factor norm must be positive, got {controller_factor_norm}")
    return tolerable_variation_bound(sup_l_lambda, sigma, lam, rho, N) / controller_factor_norm


# -----------------------------------------------------------------------------
# Spike constructions
# -----------------------------------------------------------------------------

def periodic_spike_trace(
    spike: float,
    period: int,
    length: int,
    sigma: float,
    start_time: int = 0
) -> VariationTrace:
    """Variation trace equal to `spike` every `period` steps (first at start_time) and zero elsewhere."""
    if period < 1 or length < 0:
        raise DomainError(f"Need period >= 1 and length >= 0, got period={period}, length={length}")
    if spike < 0:
        raise DomainError(f"Spike must be nonnegative, got {spike}")
    values = np.zeros(length)
    values[::period] = spike
    return VariationTrace(sigma, start_time, values)


def separation_spike(sup_l_norm: float, sigma: float, sigma0: float, rho: float, N: int) -> float:
    """
    A spike size the N-width rate tolerates while the per-step rate does not.

    One spike per N steps has d-bar_{sigma,N} = spike / N, so any spike in
    (d-bar-bar_{sigma,1}, N d-bar-bar_{sigma,N}] separates the two
    conditions; the midpoint is returned. The interval is nonempty iff
    N (sigma0/sigma)^(1-N) > 1.
    """
    lower = zames_wang_bound(sup_l_norm, sigma, sigma0, rho)
    upper = N * tolerable_variation_bound(sup_l_norm, sigma, sigma0, rho, N)
    if not upper > lower:
        raise DomainError(
            f"No separating spike for N={N}: N (sigma0/sigma)^(1-N) = {upper / lower if lower else 0:.6g} <= 1"
        )
    return 0.5 * (lower + upper)


def bound_document(
    sup_l_norm: float,
    sigma: float,
    sigma0: float,
    rho: float,
    N: int = 1,
    controller_factor_norm: Optional[float] = None
) -> Dict[str, Any]:
    """Tolerable variation bounds for scalar inputs as a JSON-ready document."""
    document: Dict[str, Any] = {
        "document": "bound",
        "schema_version": settings.schema_version,
        "sigma": sigma,
        "sigma0": sigma0,
        "rho": rho,
        "sup_l": sup_l_norm,
        "N": N,
        "tolerable_variation": tolerable_variation_bound(sup_l_norm, sigma, sigma0, rho, N),
        "zames_wang": zames_wang_bound(sup_l_norm, sigma, sigma0, rho),
    }
    if controller_factor_norm is not None:
        document["controller_factor_norm"] = controller_factor_norm
        document["adaptive_plant"] = adaptive_plant_bound(
            controller_factor_norm, sup_l_norm, sigma, sigma0, rho, N
        )
    return document
