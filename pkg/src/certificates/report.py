"""
FrozenTime - Certificate Reports

Verdicts, per-window margins and gain bounds of the stability conditions.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from ..config import settings

logger = logging.getLogger(__name__)


class CertificateVariant(str, Enum):
    """Available sufficient conditions."""
    THEOREM1 = "theorem1"
    COROLLARY1 = "corollary1"
    COROLLARY2 = "corollary2"
    LEMMA9 = "lemma9_cN"
    LEMMA10 = "lemma10_special"
    COROLLARY3 = "corollary3_bound"
    ZAMES_WANG = "zames_wang"


@dataclass(frozen=True)
class TimeSequence:
    """
    Window boundaries t_0 < t_1 < ... on a finite horizon.

    `times[0]` is t_0. `open_tail` is the first time of a trailing window
    the horizon ended before closing, or None.
    """
    times: Tuple[int, ...]
    open_tail: Optional[int] = None

    @property
    def windows(self) -> List[Tuple[int, int]]:
        return list(zip(self.times[:-1], self.times[1:]))

    @property
    def max_gap(self) -> int:
        """t-bar = sup_i (t_i - t_{i-1})."""
        return max((b - a for a, b in self.windows), default=0)

    @property
    def boundaries(self) -> List[int]:
        """t_1, t_2, ... (the times where gains are certified)."""
        return list(self.times[1:])


@dataclass(frozen=True)
class WindowMargin:
    """
    Result of one condition check.

    For window conditions `required` is rho^{t_i - t} and `achieved` the
    psi-product at the worst t, and `margin` their log-difference. For
    per-time and scalar conditions `margin` is required - achieved.
    """
    start: int
    end: int
    worst_t: int
    required: float
    achieved: float
    margin: float

    @property
    def holds(self) -> bool:
        return self.margin >= 0


@dataclass
class CertificateReport:
    """Outcome of a certificate variant."""
    variant: CertificateVariant
    holds: bool
    windows: List[WindowMargin] = field(default_factory=list)
    constants: Dict[str, float] = field(default_factory=dict)
    gain_bound: float = math.inf
    gain_claimed: bool = False
    applicable: bool = True
    failure_locations: List[int] = field(default_factory=list)
    time_sequence: Optional[TimeSequence] = None
    notes: List[str] = field(default_factory=list)

    @property
    def min_margin(self) -> float:
        return min((w.margin for w in self.windows), default=math.inf)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready form; field names are part of the report schema."""
        sequence = self.time_sequence
        return {
            "document": "certificate_report",
            "schema_version": settings.schema_version,
            "variant": self.variant.value,
            "holds": self.holds,
            "applicable": self.applicable,
            "gain_bound": self.gain_bound,
            "gain_claimed": self.gain_claimed,
            "min_margin": self.min_margin,
            "constants": dict(self.constants),
            "failure_locations": list(self.failure_locations),
            "time_sequence": None if sequence is None else list(sequence.times),
            "open_tail": None if sequence is None else sequence.open_tail,
            "notes": list(self.notes),
            "windows": [
                {
                    "start": w.start,
                    "end": w.end,
                    "worst_t": w.worst_t,
                    "required": w.required,
                    "achieved": w.achieved,
                    "margin": w.margin,
                }
                for w in self.windows
            ],
        }

    def margins_frame(self) -> pd.DataFrame:
        """One row per window, for plotting condition margins."""
        columns = ["start", "end", "worst_t", "required", "achieved", "margin"]
        return pd.DataFrame(
            [[getattr(w, c) for c in columns] for w in self.windows],
            columns=columns,
        )
