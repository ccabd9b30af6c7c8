"""
FrozenTime - Condition Comparison

Runs the window conditions and the all-stabilizing bounds side by side with
the per-step baseline on the same inputs.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..config import settings
from .conditions import check_corollary2, check_corollary3, check_lemma10, check_theorem1, check_zames_wang
from .inputs import CertificateInputs
from .psi import measured_d_bar
from .report import CertificateReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComparisonRow:
    condition: str
    holds: bool
    applicable: bool
    margin: float
    gain_bound: float


@dataclass
class ComparisonTable:
    """One row per condition plus both conventions of the per-step variation rate."""
    rows: List[ComparisonRow]
    rates: Dict[str, float] = field(default_factory=dict)
    reports: Dict[str, CertificateReport] = field(default_factory=dict)

    def row(self, condition: str) -> ComparisonRow:
        for r in self.rows:
            if r.condition == condition:
                return r
        raise KeyError(condition)

    @property
    def any_holds(self) -> bool:
        return any(r.holds for r in self.rows)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [[r.condition, r.holds, r.applicable, r.margin, r.gain_bound] for r in self.rows],
            columns=["condition", "holds", "applicable", "margin", "gain_bound"],
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "document": "comparison",
            "schema_version": settings.schema_version,
            "rates": dict(self.rates),
            "rows": [
                {
                    "condition": r.condition,
                    "holds": r.holds,
                    "applicable": r.applicable,
                    "margin": r.margin,
                    "gain_bound": r.gain_bound,
                }
                for r in self.rows
            ],
        }


def compare_conditions(
    inputs: CertificateInputs,
    N: Optional[int] = None,
    max_gap: Optional[int] = None
) -> ComparisonTable:
    """
    Evaluate theorem1, corollary2, lemma10_special, corollary3_bound and zames_wang.

    Args:
        inputs: Certificate inputs (with the variation trace)
        N: Averaging width for the N-width bound
        max_gap: Longest window for proposed time sequences

    Returns:
        ComparisonTable
    """
    N = settings.n_width if N is None else N
    reports = [
        check_theorem1(inputs, max_gap),
        check_corollary2(inputs, max_gap),
        check_lemma10(inputs),
        check_corollary3(inputs, N),
        check_zames_wang(inputs),
    ]
    rows = [
        ComparisonRow(r.variant.value, r.holds, r.applicable, r.min_margin, r.gain_bound)
        for r in reports
    ]

    sup_variation = float(np.max(inputs.variation, initial=0.0))
    rates = {
        "N": N,
        "sup_variation": sup_variation,
        "prior_rate": inputs.sigma * sup_variation,
        "d_bar_N": measured_d_bar(inputs, N),
    }
    table = ComparisonTable(rows, rates, {r.variant.value: r for r in reports})
    logger.info("Comparison: " + ", ".join(f"{r.condition}={'holds' if r.holds else 'fails'}" for r in rows))
    return table
