"""
FrozenTime - Stability Conditions

Every sufficient condition for weak and all-time l_inf stability of the loop
x = Fu + G T x, evaluated on precomputed CertificateInputs:

- theorem1 / corollary1: window condition on psi (psi_N), gain c at {t_i}
- corollary2 / lemma9_cN: window condition on psi_hat (psi_hat_N), all-time gain c-hat
- lemma10_special: per-time condition for all-stabilizing schedules, gain c-bar
- corollary3_bound: measured N-width rate against its tolerable bound
- zames_wang: the worst-case per-step baseline
"""

import logging
import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..config import settings
from ..exceptions import DomainError, InapplicableCertificateError, InfeasibleSequenceError, InputError
from ..variation import VariationTrace, n_width_averages, sup_n_width
from .bounds import tolerable_variation_bound, zames_wang_bound
from .gronwall import forcing_gain
from .inputs import CertificateInputs
from .psi import coefficient_N, measured_d_bar, psi_hat_N_trace, psi_hat_trace, psi_N_trace, psi_trace
from .report import CertificateReport, CertificateVariant, TimeSequence, WindowMargin
from .windows import as_time_sequence, check_window_condition, propose_time_sequence

logger = logging.getLogger(__name__)

SequenceLike = Union[TimeSequence, Sequence[int]]


def resolve_time_sequence(
    inputs: CertificateInputs,
    psi_values: np.ndarray,
    max_gap: Optional[int] = None,
    time_sequence: Optional[SequenceLike] = None
) -> TimeSequence:
    """An explicit sequence (argument, then inputs) or a greedy proposal."""
    if time_sequence is None:
        time_sequence = inputs.time_sequence
    if time_sequence is not None:
        return as_time_sequence(time_sequence, inputs.start_time, inputs.end_time)
    return propose_time_sequence(psi_values, inputs.rho, max_gap, inputs.start_time)


def _window_report(
    variant: CertificateVariant,
    inputs: CertificateInputs,
    psi_values: np.ndarray,
    max_gap: Optional[int],
    time_sequence: Optional[SequenceLike]
) -> CertificateReport:
    try:
        sequence = resolve_time_sequence(inputs, psi_values, max_gap, time_sequence)
    except InfeasibleSequenceError as e:
        logger.info(f"{variant.value}: no admissible time sequence ({e})")
        return CertificateReport(
            variant,
            holds=False,
            failure_locations=[e.index] if e.index is not None else [],
            notes=[str(e)],
        )

    windows = check_window_condition(psi_values, inputs.rho, sequence, inputs.start_time)
    failures = [w.worst_t for w in windows if not w.holds]
    report = CertificateReport(
        variant,
        holds=bool(windows) and not failures,
        windows=windows,
        failure_locations=failures,
        time_sequence=sequence,
    )
    if not windows:
        report.notes.append("Time sequence has no closed window")
    if sequence.open_tail is not None:
        report.notes.append(
            f"Horizon ends in an open window from t={sequence.open_tail}; "
            f"gains are certified through t={sequence.times[-1]}"
        )
    return report


# -----------------------------------------------------------------------------
# theorem1 family (gain at the time sequence)
# -----------------------------------------------------------------------------

def constants_theorem1(
    inputs: CertificateInputs,
    time_sequence: Optional[SequenceLike] = None,
    max_gap: Optional[int] = None
) -> Tuple[int, float, float]:
    """
    (t-bar, beta, c) for a time sequence.

    t-bar = sup_i (t_i - t_{i-1})
    beta  = t-bar ||F|| sup_i max_{t in (t_{i-1}, t_i]} s(t) rho^{t_i - t}
    c     = sigma^{t-bar - 1} beta / (1 - rho)

    Raises:
        DomainError: The sequence has no window
    """
    sequence = resolve_time_sequence(inputs, psi_trace(inputs), max_gap, time_sequence)
    if not sequence.windows:
        raise DomainError("constants need a time sequence with at least one window")

    gains = forcing_gain(inputs)
    worst = 0.0
    for t_prev, t_next in sequence.windows:
        t = np.arange(t_prev + 1, t_next + 1)
        worst = max(worst, float(np.max(gains[t - inputs.start_time] * inputs.rho ** (t_next - t))))

    t_bar = sequence.max_gap
    beta = t_bar * inputs.F_norm * worst
    c = inputs.sigma ** (t_bar - 1) * beta / (1.0 - inputs.rho)
    return t_bar, beta, c


def _theorem1_family(
    variant: CertificateVariant,
    inputs: CertificateInputs,
    psi_values: np.ndarray,
    max_gap: Optional[int],
    time_sequence: Optional[SequenceLike]
) -> CertificateReport:
    report = _window_report(variant, inputs, psi_values, max_gap, time_sequence)
    if report.time_sequence is None or not report.time_sequence.windows:
        return report

    t_bar, beta, c = constants_theorem1(inputs, report.time_sequence)
    report.constants.update({"t_bar": t_bar, "beta": beta, "c": c})
    report.constants["certified_through"] = report.time_sequence.times[-1]
    if not report.holds:
        return report
    if inputs.rho > 1.0 / inputs.sigma:
        report.gain_bound = c
        report.gain_claimed = True
    else:
        report.notes.append(
            f"rho = {inputs.rho} <= 1/sigma = {1.0 / inputs.sigma:.6g}: gain bound not claimed, "
            "only the contraction at the time sequence"
        )
    return report


def check_theorem1(
    inputs: CertificateInputs,
    max_gap: Optional[int] = None,
    time_sequence: Optional[SequenceLike] = None
) -> CertificateReport:
    """
    Window condition on psi with gain ||x||_{inf,t_i} <= c ||u||_{inf,t_i}.

    Args:
        inputs: Certificate inputs
        max_gap: Longest window for the proposed time sequence
        time_sequence: Explicit boundaries, overriding the inputs' sequence

    Returns:
        CertificateReport (variant theorem1)
    """
    report = _theorem1_family(CertificateVariant.THEOREM1, inputs, psi_trace(inputs), max_gap, time_sequence)
    logger.info(f"theorem1: holds={report.holds}, c={report.constants.get('c')}")
    return report


def check_corollary1(
    inputs: CertificateInputs,
    N: Optional[int] = None,
    d_bar: Optional[float] = None,
    max_gap: Optional[int] = None,
    time_sequence: Optional[SequenceLike] = None
) -> CertificateReport:
    """theorem1 with c_{sigma,N}(G) in place of c_{sigma,sigma0}(G, t)."""
    N = settings.n_width if N is None else N
    if d_bar is None:
        d_bar = measured_d_bar(inputs, N)
    report = _theorem1_family(
        CertificateVariant.COROLLARY1, inputs, psi_N_trace(inputs, N, d_bar), max_gap, time_sequence
    )
    report.constants.update({"N": N, "d_bar": d_bar, "c_N": coefficient_N(inputs, N, d_bar)})
    logger.info(f"corollary1 (N={N}): holds={report.holds}")
    return report


# -----------------------------------------------------------------------------
# corollary2 family (gain at all times)
# -----------------------------------------------------------------------------

def constants_corollary2(inputs: CertificateInputs, t_bar: int) -> Tuple[float, float]:
    """
    (beta-hat, c-hat) for the longest window t-bar.

    gamma(t) = ||F|| ||s_t||_{sigma inf} (stabilizing) or ||F|| (destabilizing)
    beta-hat = 1 + (sigma rho)^t-bar rho / (1 - rho) max_t gamma(t)
    c-hat    = ((sigma rho)^t-bar / (1 - rho) + 1) beta-hat
    """
    s_sigma = inputs.s_norm_sigma
    if s_sigma is None:
        logger.warning("Inputs carry no ||s_t||_{sigma inf}; using ||s_t||_inf in gamma")
        s_sigma = inputs.s_norm
    gamma = inputs.F_norm * np.where(inputs.stabilizing, s_sigma, 1.0)
    growth = (inputs.sigma * inputs.rho) ** t_bar
    beta_hat = 1.0 + growth * inputs.rho / (1.0 - inputs.rho) * float(np.max(gamma, initial=0.0))
    c_hat = (growth / (1.0 - inputs.rho) + 1.0) * beta_hat
    return beta_hat, c_hat


def _corollary2_family(
    variant: CertificateVariant,
    inputs: CertificateInputs,
    psi_values: np.ndarray,
    max_gap: Optional[int],
    time_sequence: Optional[SequenceLike]
) -> CertificateReport:
    report = _window_report(variant, inputs, psi_values, max_gap, time_sequence)
    if report.time_sequence is None or not report.time_sequence.windows:
        return report

    t_bar = report.time_sequence.max_gap
    beta_hat, c_hat = constants_corollary2(inputs, t_bar)
    report.constants.update({"t_bar": t_bar, "beta_hat": beta_hat, "c_hat": c_hat})
    report.constants["certified_through"] = report.time_sequence.times[-1]
    if report.holds and math.isfinite(c_hat):
        report.gain_bound = c_hat
        report.gain_claimed = True
    return report


def check_corollary2(
    inputs: CertificateInputs,
    max_gap: Optional[int] = None,
    time_sequence: Optional[SequenceLike] = None
) -> CertificateReport:
    """Window condition on psi_hat with the all-time gain ||x||_{inf,t} <= c-hat ||u||_{inf,t}."""
    report = _corollary2_family(
        CertificateVariant.COROLLARY2, inputs, psi_hat_trace(inputs), max_gap, time_sequence
    )
    logger.info(f"corollary2: holds={report.holds}, c_hat={report.constants.get('c_hat')}")
    return report


def check_lemma9(
    inputs: CertificateInputs,
    N: Optional[int] = None,
    d_bar: Optional[float] = None,
    max_gap: Optional[int] = None,
    time_sequence: Optional[SequenceLike] = None
) -> CertificateReport:
    """corollary2 with c_{sigma,N}(G) in place of c_{sigma,sigma0}(G, t)."""
    N = settings.n_width if N is None else N
    if d_bar is None:
        d_bar = measured_d_bar(inputs, N)
    report = _corollary2_family(
        CertificateVariant.LEMMA9, inputs, psi_hat_N_trace(inputs, N, d_bar), max_gap, time_sequence
    )
    report.constants.update({"N": N, "d_bar": d_bar, "c_N": coefficient_N(inputs, N, d_bar)})
    logger.info(f"lemma9_cN (N={N}): holds={report.holds}")
    return report


# -----------------------------------------------------------------------------
# All-stabilizing special cases
# -----------------------------------------------------------------------------

def _stabilizing_gate(
    variant: CertificateVariant,
    inputs: CertificateInputs,
    strict: bool
) -> Optional[CertificateReport]:
    """An inapplicable report when some frozen loop is destabilizing, else None."""
    ok = inputs.stabilizing & np.isfinite(inputs.l_norm) & np.isfinite(inputs.s_norm)
    if np.all(ok):
        return None
    first = int(inputs.times[~ok][0])
    message = f"{variant.value} needs every frozen loop stabilizing; t={first} is not"
    if strict:
        raise InapplicableCertificateError(message)
    logger.warning(message)
    return CertificateReport(variant, holds=False, applicable=False, failure_locations=[first], notes=[message])


def c_bar(inputs: CertificateInputs) -> float:
    """c-bar = ||F|| sup_t ||s_t||_inf / (1 - rho)."""
    return inputs.F_norm * float(np.max(inputs.s_norm, initial=0.0)) / (1.0 - inputs.rho)


def check_lemma10(inputs: CertificateInputs, strict: bool = False) -> CertificateReport:
    """
    Per-time condition c_{sigma,sigma0}(G, t) <= rho / ||l_t||_{sigma0 inf} for all t.

    Holding certifies ||x||_{inf,t} <= c-bar ||u||_{inf,t} at every t.
    """
    variant = CertificateVariant.LEMMA10
    gated = _stabilizing_gate(variant, inputs, strict)
    if gated is not None:
        return gated

    with np.errstate(divide="ignore"):
        required = inputs.rho / inputs.l_norm
    margins = required - inputs.c_coeff
    windows = [
        WindowMargin(int(t) - 1, int(t), int(t), float(r), float(c), float(m))
        for t, r, c, m in zip(inputs.times, required, inputs.c_coeff, margins)
    ]
    failures = [w.worst_t for w in windows if not w.holds]
    bound = c_bar(inputs)
    report = CertificateReport(
        variant,
        holds=not failures,
        windows=windows,
        constants={"c_bar": bound},
        failure_locations=failures,
    )
    if report.holds:
        report.gain_bound = bound
        report.gain_claimed = True
    logger.info(f"lemma10_special: holds={report.holds}, c_bar={bound:.6g}")
    return report


def variation_bound_check(
    trace: VariationTrace,
    sup_l_norm: float,
    sigma: float,
    sigma0: float,
    rho: float,
    N: int
) -> CertificateReport:
    """
    Measured d-bar_{sigma,N}(G) against d-bar-bar_{sigma,N}(G).

    An unbounded sup ||l_t|| makes the check inapplicable (bound 0).
    """
    if not math.isclose(trace.sigma, sigma):
        raise DomainError(f"Trace was measured at sigma={trace.sigma}, check uses sigma={sigma}")
    bound = tolerable_variation_bound(sup_l_norm, sigma, sigma0, rho, N)
    d_bar = sup_n_width(trace, N)
    applicable = math.isfinite(sup_l_norm)

    worst_t = trace.start_time
    if trace.length:
        worst_t = trace.start_time + int(np.argmax(n_width_averages(trace, N)))
    margin = WindowMargin(trace.start_time - 1, trace.end_time, worst_t, bound, d_bar, bound - d_bar)
    report = CertificateReport(
        CertificateVariant.COROLLARY3,
        holds=applicable and margin.holds,
        windows=[margin],
        constants={"N": N, "d_bar": d_bar, "tolerable": bound, "sup_l": sup_l_norm},
        applicable=applicable,
        failure_locations=[] if margin.holds else [worst_t],
    )
    if not applicable:
        report.notes.append("sup ||l_t|| is unbounded: some frozen loop is destabilizing")
    return report


def check_corollary3(
    inputs: CertificateInputs,
    N: Optional[int] = None,
    strict: bool = False
) -> CertificateReport:
    """d-bar_{sigma,N}(G) <= d-bar-bar_{sigma,N}(G) certifies the all-time gain c-bar."""
    N = settings.n_width if N is None else N
    variant = CertificateVariant.COROLLARY3
    gated = _stabilizing_gate(variant, inputs, strict)
    if gated is not None:
        return gated
    if inputs.variation is None:
        raise InputError("corollary3_bound needs the variation trace")

    trace = VariationTrace(inputs.sigma, inputs.start_time, inputs.variation)
    sup_l = float(np.max(inputs.l_norm))
    report = variation_bound_check(trace, sup_l, inputs.sigma, inputs.sigma0, inputs.rho, N)
    bound = c_bar(inputs)
    report.constants["c_bar"] = bound
    if report.holds:
        report.gain_bound = bound
        report.gain_claimed = True
    logger.info(f"corollary3_bound (N={N}): holds={report.holds}")
    return report


def zames_wang_check(
    trace: VariationTrace,
    sup_l_norm: float,
    sigma: float,
    sigma0: float,
    rho: float
) -> CertificateReport:
    """
    Per-step baseline ||nabla g_t||_{sigma inf} <= d-bar-bar_{sigma,1}(G) at every t.

    failure_locations lists every t above the bound.
    """
    if not math.isclose(trace.sigma, sigma):
        raise DomainError(f"Trace was measured at sigma={trace.sigma}, check uses sigma={sigma}")
    bound = zames_wang_bound(sup_l_norm, sigma, sigma0, rho)
    applicable = math.isfinite(sup_l_norm)
    windows = [
        WindowMargin(int(t) - 1, int(t), int(t), bound, float(v), bound - float(v))
        for t, v in zip(trace.times, trace.values)
    ]
    failures = [w.worst_t for w in windows if not w.holds]
    sup_variation = float(np.max(trace.values, initial=0.0))
    report = CertificateReport(
        CertificateVariant.ZAMES_WANG,
        holds=applicable and not failures,
        windows=windows,
        constants={
            "tolerable": bound,
            "sup_l": sup_l_norm,
            "sup_variation": sup_variation,
            "prior_rate": sigma * sup_variation,
        },
        applicable=applicable,
        failure_locations=failures,
    )
    if not applicable:
        report.notes.append("sup ||l_t|| is unbounded: the per-step bound is 0")
    logger.info(f"zames_wang: holds={report.holds}, bound={bound:.6g}, {len(failures)} failing times")
    return report


def check_zames_wang(inputs: CertificateInputs, strict: bool = False) -> CertificateReport:
    """zames_wang_check on the variation trace and sup ||l_t|| of the inputs."""
    if inputs.variation is None:
        raise InputError("zames_wang needs the variation trace")
    if strict:
        _stabilizing_gate(CertificateVariant.ZAMES_WANG, inputs, strict=True)
    trace = VariationTrace(inputs.sigma, inputs.start_time, inputs.variation)
    report = zames_wang_check(trace, float(np.max(inputs.l_norm)), inputs.sigma, inputs.sigma0, inputs.rho)
    if report.holds:
        report.gain_bound = c_bar(inputs)
        report.gain_claimed = True
        report.constants["c_bar"] = report.gain_bound
    return report


def run_certificate(
    inputs: CertificateInputs,
    variant: Union[CertificateVariant, str],
    N: Optional[int] = None,
    max_gap: Optional[int] = None,
    strict: bool = False
) -> CertificateReport:
    """Evaluate one variant by name."""
    variant = CertificateVariant(variant)
    if variant is CertificateVariant.THEOREM1:
        return check_theorem1(inputs, max_gap)
    if variant is CertificateVariant.COROLLARY1:
        return check_corollary1(inputs, N, max_gap=max_gap)
    if variant is CertificateVariant.COROLLARY2:
        return check_corollary2(inputs, max_gap)
    if variant is CertificateVariant.LEMMA9:
        return check_lemma9(inputs, N, max_gap=max_gap)
    if variant is CertificateVariant.LEMMA10:
        return check_lemma10(inputs, strict)
    if variant is CertificateVariant.COROLLARY3:
        return check_corollary3(inputs, N, strict)
    return check_zames_wang(inputs, strict)
