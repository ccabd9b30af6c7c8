"""
FrozenTime - Recursion Unrolling

Closed form of v(t) = decay(t) v(t-1) + forcing(t), the discrete
Gronwall-Bellman step behind the window conditions, and the certified
state envelope it produces.
"""

import logging
from typing import Optional

import numpy as np

from ..exceptions import InputError
from .inputs import CertificateInputs
from .psi import psi_trace

logger = logging.getLogger(__name__)


def unroll_recursion(decay, forcing, initial: float = 0.0) -> np.ndarray:
    """
    v(t) = (prod_{j<=t} decay(j)) initial + sum_{tau<=t} (prod_{tau<j<=t} decay(j)) forcing(tau).

    Args:
        decay: decay(0), ..., decay(T-1)
        forcing: forcing(0), ..., forcing(T-1)
        initial: v(-1)

    Returns:
        v(0), ..., v(T-1)
    """
    decay = np.asarray(decay, dtype=float).reshape(-1)
    forcing = np.asarray(forcing, dtype=float).reshape(-1)
    if decay.shape != forcing.shape:
        raise InputError(f"decay and forcing differ in length: {len(decay)} vs {len(forcing)}")
    T = len(decay)
    if T == 0:
        return np.zeros(0)

    # transfer[t, tau] = prod_{j=tau+1}^{t} decay(j)
    transfer = np.zeros((T, T))
    for tau in range(T):
        transfer[tau, tau] = 1.0
        transfer[tau + 1:, tau] = np.cumprod(decay[tau + 1:])
    return np.cumprod(decay) * initial + transfer @ forcing


def forcing_gain(inputs: CertificateInputs) -> np.ndarray:
    """
    ||s_t||_{inf,t} where finite, 1 elsewhere.

    Times with an unbounded sensitivity are destabilizing, where the loop is
    bounded through x = Fu + G T x and the forcing enters with gain 1.
    """
    return np.where(np.isfinite(inputs.s_norm), inputs.s_norm, 1.0)


def state_envelope(
    inputs: CertificateInputs,
    u_sup,
    initial: float = 0.0,
    psi_values: Optional[np.ndarray] = None
) -> np.ndarray:
    """
    Envelope v(t) >= ||x||_{sigma inf,t}.

    v(t) = psi(t) v(t-1) + ||F||_inf s(t) ||u||_{inf,t}, with s(t) from
    forcing_gain and v(start_time - 1) = initial.

    Args:
        inputs: Certificate inputs
        u_sup: ||u||_{inf,t} over the horizon
        initial: ||x||_{sigma inf} before the horizon
        psi_values: Growth factors (default psi of the inputs)
    """
    u_sup = np.asarray(u_sup, dtype=float).reshape(-1)
    if len(u_sup) != inputs.length:
        raise InputError(f"u_sup has {len(u_sup)} entries, horizon has {inputs.length}")
    decay = psi_trace(inputs) if psi_values is None else psi_values
    return unroll_recursion(decay, inputs.F_norm * forcing_gain(inputs) * u_sup, initial)
