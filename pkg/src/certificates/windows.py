"""
FrozenTime - Window Conditions

The window product condition

    rho^{t_i - t} >= prod_{j=t+1}^{t_i} psi(j)   for all t in [t_{i-1}, t_i - 1]

evaluated in log space, and a greedy construction of the time sequence.
"""

import logging
import math
from typing import List, Optional, Sequence, Union

import numpy as np

from ..config import settings
from ..exceptions import DomainError, InfeasibleSequenceError
from .report import TimeSequence, WindowMargin

logger = logging.getLogger(__name__)


def _excess(psi_values, rho: float) -> np.ndarray:
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (0, 1), got {rho}")
    values = np.asarray(psi_values, dtype=float).reshape(-1)
    if np.any(~(values > 0)):
        raise DomainError("psi values must be positive")
    return np.log(values) - math.log(rho)


def _window_margins(excess: np.ndarray) -> np.ndarray:
    """log rho^{e-t} - log prod psi for t = t_prev .. e-1, from prefix sums."""
    prefix = np.concatenate([[0.0], np.cumsum(excess)])
    with np.errstate(invalid="ignore"):
        margins = prefix[:-1] - prefix[-1]
    return np.where(np.isnan(margins), -math.inf, margins)


def as_time_sequence(times: Union[TimeSequence, Sequence[int]], start_time: int, end_time: int) -> TimeSequence:
    """
    Normalize explicit boundaries to a TimeSequence on [start_time, end_time].

    t_0 = start_time - 1 is prepended when missing; a last boundary before
    end_time leaves an open tail.
    """
    if isinstance(times, TimeSequence):
        return times
    times = [int(t) for t in times]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise DomainError("time sequence must be strictly increasing")
    if not times or times[0] >= start_time:
        times = [start_time - 1] + times
    if times[0] < start_time - 1 or times[-1] > end_time:
        raise DomainError(f"time sequence must lie in [{start_time - 1}, {end_time}]")
    open_tail = times[-1] + 1 if times[-1] < end_time else None
    return TimeSequence(tuple(times), open_tail)


def check_window_condition(
    psi_values,
    rho: float,
    time_sequence: Union[TimeSequence, Sequence[int]],
    start_time: int = 0
) -> List[WindowMargin]:
    """
    Evaluate the window product condition on every window.

    Args:
        psi_values: psi(j), entry k at time start_time + k
        rho: Contraction rate in (0, 1)
        time_sequence: Window boundaries (t_0 first, or t_0 = start_time - 1 implied)
        start_time: Time of the first psi value

    Returns:
        One WindowMargin per window; margins are log-differences and the
        condition holds iff every margin is >= 0
    """
    excess = _excess(psi_values, rho)
    end_time = start_time + len(excess) - 1
    sequence = as_time_sequence(time_sequence, start_time, end_time)

    out: List[WindowMargin] = []
    for t_prev, t_next in sequence.windows:
        window = excess[t_prev + 1 - start_time:t_next + 1 - start_time]
        margins = _window_margins(window)
        k = int(np.argmin(margins))
        span = t_next - (t_prev + k)
        required = rho ** span
        with np.errstate(over="ignore"):
            achieved = float(required * np.exp(-margins[k])) if math.isfinite(margins[k]) else math.inf
        out.append(WindowMargin(t_prev, t_next, t_prev + k, required, achieved, float(margins[k])))
        if margins[k] < 0:
            logger.debug(f"Window ({t_prev}, {t_next}] fails at t={t_prev + k}: margin {margins[k]:.6g}")
    return out


def propose_time_sequence(
    psi_values,
    rho: float,
    max_gap: Optional[int] = None,
    start_time: int = 0
) -> TimeSequence:
    """
    Greedy time sequence for the window condition.

    From the last boundary t_{i-1} the next window closes at the smallest
    t_i <= t_{i-1} + max_gap for which the condition holds on the whole
    window, i.e. the first t_i whose log-product prefix is no larger than
    every earlier prefix of the window.

    Raises:
        InfeasibleSequenceError: No boundary within max_gap (index = first
            time of the window that cannot be closed)
    """
    max_gap = settings.max_gap if max_gap is None else max_gap
    if max_gap < 1:
        raise DomainError(f"max_gap must be positive, got {max_gap}")
    excess = _excess(psi_values, rho)
    end_time = start_time + len(excess) - 1

    times = [start_time - 1]
    open_tail = None
    t_prev = start_time - 1
    while t_prev < end_time:
        acc = 0.0
        lowest = 0.0
        closed = None
        for e in range(t_prev + 1, min(t_prev + max_gap, end_time) + 1):
            acc += excess[e - start_time]
            if acc <= lowest:
                closed = e
                break
            lowest = min(lowest, acc)

        if closed is None:
            if t_prev + max_gap > end_time and len(times) > 1:
                open_tail = t_prev + 1
                logger.info(f"Horizon ends inside an open window starting at t={open_tail}")
                break
            raise InfeasibleSequenceError(
                f"No window starting at t={t_prev + 1} closes within {max_gap} steps",
                index=t_prev + 1,
            )
        times.append(closed)
        t_prev = closed

    sequence = TimeSequence(tuple(times), open_tail)
    logger.debug(f"Proposed {len(sequence.windows)} windows, longest {sequence.max_gap}")
    return sequence
