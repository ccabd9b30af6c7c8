"""
FrozenTime - Signals Module

Discrete-time signals and the norms everything else is built on:
- Signal traces with zero extension
- Moving-window fading-memory norms
- Shift and truncation operators
- CSV / JSON serialization
"""

from .signal import (
    Signal,
    WeightSpec,
    weighted_norm,
    running_weighted_norm,
    sup_norm_trace,
    magnitudes,
    shift,
    truncate,
    as_signal,
)
from .io import (
    signal_to_frame,
    signal_from_frame,
    read_signal_csv,
    signal_to_dict,
    signal_from_dict,
)

__all__ = [
    "Signal",
    "WeightSpec",
    "weighted_norm",
    "running_weighted_norm",
    "sup_norm_trace",
    "magnitudes",
    "shift",
    "truncate",
    "as_signal",
    "signal_to_frame",
    "signal_from_frame",
    "read_signal_csv",
    "signal_to_dict",
    "signal_from_dict",
]
