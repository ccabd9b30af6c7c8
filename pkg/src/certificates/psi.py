"""
FrozenTime - Psi Functions

Per-time growth factors that the window conditions multiply.

    psi(t)     = max{ min{ l(t) c(t), g(t) }, 1/sigma }
    psi_hat(t) = max{ l(t) c(t), 1/sigma } if stabilizing, max{ g(t), 1/sigma } otherwise

The _N variants replace c_{sigma,sigma0}(G, t) by the constant c_{sigma,N}(G).
"""

import logging
from typing import Optional, Union

import numpy as np

from ..exceptions import InputError
from ..variation import VariationTrace, c_sigma_N, sup_n_width
from .inputs import CertificateInputs

logger = logging.getLogger(__name__)

Coefficient = Union[float, np.ndarray]


def loop_product(l_norm: Coefficient, coefficient: Coefficient) -> np.ndarray:
    """||l_t|| c, unbounded wherever ||l_t|| is (c = 0 included)."""
    l_norm = np.asarray(l_norm, dtype=float)
    coefficient = np.asarray(coefficient, dtype=float)
    with np.errstate(invalid="ignore"):
        out = l_norm * coefficient
    return np.where(np.isinf(l_norm), np.inf, out)


def _psi(inputs: CertificateInputs, coefficient: Coefficient) -> np.ndarray:
    inner = np.minimum(loop_product(inputs.l_norm, coefficient), inputs.g_norm)
    return np.maximum(inner, 1.0 / inputs.sigma)


def _psi_hat(inputs: CertificateInputs, coefficient: Coefficient) -> np.ndarray:
    branch = np.where(inputs.stabilizing, loop_product(inputs.l_norm, coefficient), inputs.g_norm)
    return np.maximum(branch, 1.0 / inputs.sigma)


def measured_d_bar(inputs: CertificateInputs, N: int) -> float:
    """d-bar_{sigma,N}(G) from the variation trace carried by the inputs."""
    if inputs.variation is None:
        raise InputError("Certificate inputs carry no variation trace")
    return sup_n_width(VariationTrace(inputs.sigma, inputs.start_time, inputs.variation), N)


def coefficient_N(inputs: CertificateInputs, N: int, d_bar: Optional[float] = None) -> float:
    """c_{sigma,N}(G), measuring d-bar from the inputs when it is not given."""
    if d_bar is None:
        d_bar = measured_d_bar(inputs, N)
    return c_sigma_N(d_bar, inputs.sigma, inputs.sigma0, N)


# -----------------------------------------------------------------------------
# Traces over the horizon
# -----------------------------------------------------------------------------

def psi_trace(inputs: CertificateInputs) -> np.ndarray:
    return _psi(inputs, inputs.c_coeff)


def psi_N_trace(inputs: CertificateInputs, N: int, d_bar: Optional[float] = None) -> np.ndarray:
    return _psi(inputs, coefficient_N(inputs, N, d_bar))


def psi_hat_trace(inputs: CertificateInputs) -> np.ndarray:
    return _psi_hat(inputs, inputs.c_coeff)


def psi_hat_N_trace(inputs: CertificateInputs, N: int, d_bar: Optional[float] = None) -> np.ndarray:
    return _psi_hat(inputs, coefficient_N(inputs, N, d_bar))


# -----------------------------------------------------------------------------
# Single times
# -----------------------------------------------------------------------------

def psi(inputs: CertificateInputs, t: int) -> float:
    """psi(t); destabilizing times (l = +inf) fall back to g(t) through the min."""
    return float(psi_trace(inputs)[inputs.index(t)])


def psi_N(inputs: CertificateInputs, t: int, N: int, d_bar: Optional[float] = None) -> float:
    return float(psi_N_trace(inputs, N, d_bar)[inputs.index(t)])


def psi_hat(inputs: CertificateInputs, t: int) -> float:
    return float(psi_hat_trace(inputs)[inputs.index(t)])


def psi_hat_N(inputs: CertificateInputs, t: int, N: int, d_bar: Optional[float] = None) -> float:
    return float(psi_hat_N_trace(inputs, N, d_bar)[inputs.index(t)])
