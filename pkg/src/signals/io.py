"""
FrozenTime - Signal Serialization

CSV form: one row per time step with columns t, x_1, ..., x_n.
JSON form: {"start_time": int, "dimension": int, "values": [[...], ...]}.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd

from ..exceptions import InputError
from .signal import Signal

logger = logging.getLogger(__name__)


def signal_to_frame(x: Signal, prefix: str = "x") -> pd.DataFrame:
    """Signal as a DataFrame with a t column and one column per component."""
    columns = {"t": x.times}
    for i in range(x.dimension):
        columns[f"{prefix}_{i + 1}"] = x.values[:, i]
    return pd.DataFrame(columns)


def signal_from_frame(frame: pd.DataFrame) -> Signal:
    """Inverse of signal_to_frame; times must be consecutive."""
    if "t" not in frame.columns:
        raise InputError("Signal CSV needs a 't' column")
    value_columns = [c for c in frame.columns if c != "t"]
    if not value_columns:
        raise InputError("Signal CSV needs at least one value column")
    times = frame["t"].to_numpy()
    if len(times) and not np.array_equal(times, np.arange(times[0], times[0] + len(times))):
        raise InputError("Signal CSV times must be consecutive integers")
    start = int(times[0]) if len(times) else 0
    return Signal(start, frame[value_columns].to_numpy(dtype=float), dimension=len(value_columns))


def read_signal_csv(path: Union[str, Path]) -> Signal:
    return signal_from_frame(pd.read_csv(path))


def signal_to_dict(x: Signal) -> Dict[str, Any]:
    return {
        "start_time": x.start_time,
        "dimension": x.dimension,
        "values": x.values.tolist(),
    }


def signal_from_dict(data: Dict[str, Any]) -> Signal:
    try:
        return Signal(int(data["start_time"]), data["values"], dimension=data.get("dimension"))
    except KeyError as e:
        raise InputError(f"Signal document is missing field {e}") from e
