"""
FrozenTime - Closed-Loop Simulation

Forward simulation of x(t) = (Fu)(t) + (G T x)(t), the per-time norm traces
the certificates consume, and checks of measured gains against certified
bounds.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..certificates import CertificateInputs
from ..config import settings
from ..operators import FrozenClass, apply, closed_loop_frozen_norms, weighted_tap_norm
from ..signals import Signal, WeightSpec, running_weighted_norm, shift, signal_to_frame
from ..variation import c_coeff_trace, variation_trace
from .scenario import Scenario

logger = logging.getLogger(__name__)


def _running_sup(u: Signal, horizon: range) -> np.ndarray:
    """||u||_{inf,t} (max vector norm) for every t in the horizon."""
    first = min(u.start_time, horizon.start)
    values = u.window(first, horizon.stop - 1)
    running = np.maximum.accumulate(np.abs(values).max(axis=1))
    return running[horizon.start - first:]


def state_norm_trace(x: Signal, sigma: float) -> np.ndarray:
    """Measured ||x||_{sigma inf,t} under the max vector norm."""
    return running_weighted_norm(x, WeightSpec(sigma=sigma, vector_norm="max"))


@dataclass
class SimResult:
    """
    Outcome of one closed-loop run.

    x stops before `diverged_at` when the run diverged. `u_sup` covers the
    whole horizon.
    """
    name: str
    x: Signal
    u: Signal
    u_sup: np.ndarray
    horizon: range
    diverged_at: Optional[int] = None
    norm_traces: Optional[CertificateInputs] = None

    @property
    def diverged(self) -> bool:
        return self.diverged_at is not None

    @property
    def x_sup(self) -> np.ndarray:
        """||x||_{inf,t} over the simulated times."""
        if self.x.length == 0:
            return np.zeros(0)
        return np.maximum.accumulate(np.abs(self.x.values).max(axis=1))

    @property
    def gain_trace(self) -> np.ndarray:
        """||x||_{inf,t} / ||u||_{inf,t}; NaN where ||u||_{inf,t} = 0."""
        u_sup = self.u_sup[:self.x.length]
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(u_sup > 0, self.x_sup / np.where(u_sup > 0, u_sup, 1.0), np.nan)

    def gain_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t": self.x.times,
            "x_sup": self.x_sup,
            "u_sup": self.u_sup[:self.x.length],
            "gain": self.gain_trace,
        })

    def frames(self) -> Dict[str, pd.DataFrame]:
        """Plot-ready traces keyed by file stem."""
        return {"x": signal_to_frame(self.x, "x"), "u": signal_to_frame(self.u, "u"), "gain": self.gain_frame()}

    def summary(self) -> Dict[str, Any]:
        gains = self.gain_trace
        finite = gains[np.isfinite(gains)]
        return {
            "document": "simulation_summary",
            "schema_version": settings.schema_version,
            "name": self.name,
            "horizon": [self.horizon.start, self.horizon.stop - 1],
            "steps": self.x.length,
            "diverged": self.diverged,
            "diverged_at": self.diverged_at,
            "max_gain": float(finite.max()) if len(finite) else None,
            "final_gain": float(finite[-1]) if len(finite) else None,
        }


def simulate(s: Scenario) -> SimResult:
    """
    Simulate the loop forward in time from zero initial conditions.

    The one-step delay makes x(t) depend on x(tau), tau < t, only. A run
    whose state exceeds divergence_threshold * max(1, ||u||_{inf,t}) (or
    overflows) stops there and is flagged divergent.

    Args:
        s: Scenario

    Returns:
        SimResult
    """
    horizon = s.horizon
    u = s.input_signal()
    fu = apply(s.F, u, horizon).values
    u_sup = _running_sup(u, horizon)
    threshold = settings.divergence_threshold
    logger.info(f"Simulating '{s.name}' on [{horizon.start}, {horizon.stop - 1}]")

    x = np.zeros((len(horizon), s.dimension))
    diverged_at = None
    steps = len(horizon)
    with np.errstate(over="ignore", invalid="ignore"):
        for k, t in enumerate(horizon):
            past = Signal._wrap(horizon.start, x[:k])
            x[k] = fu[k] + s.G.snapshot(t, shift(past, 1))
            size = float(np.abs(x[k]).max())
            if not math.isfinite(size) or size > threshold * max(1.0, float(u_sup[k])):
                diverged_at, steps = t, k
                logger.warning(f"'{s.name}' diverged at t={t} (|x| = {size:.3g})")
                break

    result = SimResult(
        name=s.name,
        x=Signal(horizon.start, x[:steps], dimension=s.dimension),
        u=u,
        u_sup=u_sup,
        horizon=horizon,
        diverged_at=diverged_at,
    )
    logger.info(f"'{s.name}' finished: {steps} steps, diverged={result.diverged}")
    return result


def collect_certificate_inputs(s: Scenario, result: Optional[SimResult] = None) -> CertificateInputs:
    """
    Evaluate every per-time trace a certificate needs on the scenario horizon.

    ||F||_inf is the largest frozen norm of F over the horizon. ||g_t|| and
    ||nabla g_t|| are upper bounds (exact for linear kinds).

    Args:
        s: Scenario
        result: Completed run, only used for logging

    Returns:
        CertificateInputs carrying the variation trace and s_norm_sigma
    """
    if result is not None and result.diverged:
        logger.info(f"'{s.name}' diverged at t={result.diverged_at}; collecting traces anyway")

    s_norm, l_norm, s_sigma, g_norm, stabilizing = [], [], [], [], []
    F_norm = 0.0
    for t in s.horizon:
        norms = closed_loop_frozen_norms(s.G, t, s.sigma, s.sigma0)
        s_norm.append(norms.s_norm.upper)
        l_norm.append(norms.l_norm.upper)
        s_sigma.append(norms.s_norm_sigma.upper)
        stabilizing.append(norms.classification is FrozenClass.STABILIZING)
        g_norm.append(weighted_tap_norm(s.G.majorant_taps(t), s.sigma))
        F_norm = max(F_norm, weighted_tap_norm(s.F.majorant_taps(t), 1.0))

    trace = variation_trace(s.G, s.horizon, s.sigma)
    inputs = CertificateInputs(
        sigma=s.sigma,
        sigma0=s.sigma0,
        rho=s.rho,
        F_norm=F_norm,
        s_norm=s_norm,
        l_norm=l_norm,
        g_norm=g_norm,
        c_coeff=c_coeff_trace(trace, s.sigma0),
        stabilizing=stabilizing,
        start_time=s.horizon.start,
        s_norm_sigma=s_sigma,
        variation=trace.values,
        time_sequence=s.time_sequence,
    )
    destabilizing = int(np.sum(~inputs.stabilizing))
    logger.info(f"'{s.name}': {destabilizing} destabilizing frozen loops out of {inputs.length}")
    return inputs


def with_norm_traces(s: Scenario, result: SimResult) -> SimResult:
    """Copy of the result carrying the certificate traces."""
    return replace(result, norm_traces=collect_certificate_inputs(s, result))


@dataclass(frozen=True)
class GainCheck:
    """Measured gains against a certified bound."""
    ok: bool
    worst_ratio: float
    worst_t: Optional[int]
    checked: int
    skipped: List[int] = field(default_factory=list)


def verify_gain_bound(
    result: SimResult,
    bound: float,
    at: Optional[Sequence[int]] = None,
    rtol: float = 1e-9
) -> GainCheck:
    """
    Compare ||x||_{inf,t} / ||u||_{inf,t} with `bound`.

    Args:
        result: Completed run
        bound: Certified gain (may be +inf)
        at: Times to check (default every simulated time)
        rtol: Relative slack for rounding

    Returns:
        GainCheck; times with ||u||_{inf,t} = 0 are skipped
    """
    start = result.horizon.start
    times = list(result.x.times) if at is None else [int(t) for t in at]
    gains = result.gain_trace

    worst_ratio, worst_t, checked = 0.0, None, 0
    skipped: List[int] = []
    for t in times:
        k = t - start
        if result.diverged and t >= result.diverged_at:
            worst_ratio, worst_t = math.inf, result.diverged_at
            checked += 1
            break
        if not 0 <= k < len(gains) or not np.isfinite(gains[k]):
            skipped.append(t)
            continue
        checked += 1
        if gains[k] > worst_ratio or worst_t is None:
            worst_ratio, worst_t = float(gains[k]), t

    if skipped:
        logger.warning(f"Gain check skipped {len(skipped)} times with ||u||_inf = 0 or outside the run")
    ok = worst_ratio <= bound * (1.0 + rtol) if math.isfinite(bound) else True
    return GainCheck(ok, worst_ratio, worst_t, checked, skipped)
