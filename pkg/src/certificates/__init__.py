"""
FrozenTime - Certificates Module

Checkable sufficient conditions for stability of x = Fu + G T x:
- Growth factors psi, psi_N, psi_hat, psi_hat_N
- Window product conditions and greedy time sequences
- Gain constants c, c-hat, c-bar and tolerable variation bounds
- The per-step baseline and side-by-side comparison
- Recursion unrolling for state envelopes
"""

from .inputs import (
    CertificateInputs,
    CertificateInputsDocument,
    inputs_from_document,
    inputs_to_document,
    load_certificate_inputs,
    dump_certificate_inputs,
    with_time_sequence,
)
from .report import CertificateVariant, CertificateReport, TimeSequence, WindowMargin
from .psi import (
    loop_product,
    psi,
    psi_N,
    psi_hat,
    psi_hat_N,
    psi_trace,
    psi_N_trace,
    psi_hat_trace,
    psi_hat_N_trace,
    measured_d_bar,
)
from .windows import as_time_sequence, check_window_condition, propose_time_sequence
from .bounds import (
    zames_wang_bound,
    tolerable_variation_bound,
    adaptive_plant_bound,
    periodic_spike_trace,
    separation_spike,
    bound_document,
)
from .gronwall import unroll_recursion, forcing_gain, state_envelope
from .conditions import (
    resolve_time_sequence,
    constants_theorem1,
    constants_corollary2,
    c_bar,
    check_theorem1,
    check_corollary1,
    check_corollary2,
    check_lemma9,
    check_lemma10,
    check_corollary3,
    variation_bound_check,
    zames_wang_check,
    check_zames_wang,
    run_certificate,
)
from .compare import ComparisonRow, ComparisonTable, compare_conditions

__all__ = [
    "CertificateInputs",
    "CertificateInputsDocument",
    "inputs_from_document",
    "inputs_to_document",
    "load_certificate_inputs",
    "dump_certificate_inputs",
    "with_time_sequence",
    "CertificateVariant",
    "CertificateReport",
    "TimeSequence",
    "WindowMargin",
    "loop_product",
    "psi",
    "psi_N",
    "psi_hat",
    "psi_hat_N",
    "psi_trace",
    "psi_N_trace",
    "psi_hat_trace",
    "psi_hat_N_trace",
    "measured_d_bar",
    "as_time_sequence",
    "check_window_condition",
    "propose_time_sequence",
    "zames_wang_bound",
    "tolerable_variation_bound",
    "adaptive_plant_bound",
    "periodic_spike_trace",
    "separation_spike",
    "bound_document",
    "unroll_recursion",
    "forcing_gain",
    "state_envelope",
    "resolve_time_sequence",
    "constants_theorem1",
    "constants_corollary2",
    "c_bar",
    "check_theorem1",
    "check_corollary1",
    "check_corollary2",
    "check_lemma9",
    "check_lemma10",
    "check_corollary3",
    "variation_bound_check",
    "zames_wang_check",
    "check_zames_wang",
    "run_certificate",
    "ComparisonRow",
    "ComparisonTable",
    "compare_conditions",
]
