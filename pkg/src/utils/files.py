"""
FrozenTime - File Output

Every output file is written atomically and rendered deterministically, so
rerunning a command with the same inputs yields byte-identical files.
"""

import json
import logging
import math
import os
import tempfile
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Union

import numpy as np
import pandas as pd

from ..config import settings

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def atomic_write_text(path: PathLike, text: str) -> Path:
    """Write text to path via a temporary file in the same directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug(f"Wrote {path}")
    return path


def json_ready(value: Any) -> Any:
    """Convert dataclasses, numpy scalars/arrays, tuples and enums into plain JSON types."""
    if is_dataclass(value) and not isinstance(value, type):
        return json_ready(asdict(value))
    if hasattr(value, "model_dump"):
        return json_ready(value.model_dump())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_ready(v) for v in value]
    if isinstance(value, np.ndarray):
        return [json_ready(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    return value


def _format_float(value: float, digits: int) -> str:
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    text = format(value, f".{digits}g")
    if text in ("-0", "0"):
        return "0.0"
    return text


def _render(value: Any, digits: int, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(key)}: {_render(val, digits, indent, level + 1)}"
            for key, val in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in value):
            return "[" + ", ".join(_render(v, digits, indent, level + 1) for v in value) + "]"
        items = [f"{pad}{_render(v, digits, indent, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        return _format_float(value, digits)
    if isinstance(value, int):
        return str(value)
    return json.dumps(value)


def to_json_text(value: Any, digits: int = None, indent: int = 2) -> str:
    """
    Render a JSON document with a fixed number of significant digits.

    Non-finite floats become the strings "inf", "-inf" and "nan".
    """
    digits = digits or settings.float_digits
    return _render(json_ready(value), digits, indent, 0) + "\n"


def frame_to_csv_text(frame: pd.DataFrame, digits: int = None) -> str:
    """Render a DataFrame as CSV with a fixed number of significant digits."""
    digits = digits or settings.float_digits
    return frame.to_csv(index=False, float_format=f"%.{digits}g", lineterminator="\n")


def write_json(path: PathLike, value: Any) -> Path:
    return atomic_write_text(path, to_json_text(value))


def write_frame(path: PathLike, frame: pd.DataFrame) -> Path:
    return atomic_write_text(path, frame_to_csv_text(frame))
