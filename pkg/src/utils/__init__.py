"""
FrozenTime - Utilities Module

File output helpers shared by the CLI, the scripts and the API:
- Atomic text writes (temporary file + rename)
- JSON rendering with fixed significant digits
- pandas CSV rendering
"""

from .files import (
    atomic_write_text,
    to_json_text,
    json_ready,
    frame_to_csv_text,
    write_json,
    write_frame,
)

__all__ = [
    "atomic_write_text",
    "to_json_text",
    "json_ready",
    "frame_to_csv_text",
    "write_json",
    "write_frame",
]
