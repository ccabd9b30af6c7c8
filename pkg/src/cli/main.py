"""
FrozenTime - Command Line

Subcommands:
    simulate     Run scenarios; write x/u/gain CSVs and a JSON summary
    certify      Evaluate one certificate variant; write the report and its margins
    compare      Evaluate every condition side by side
    bound        Print the tolerable variation bounds for scalar inputs
    gen-example  Write a seeded example scenario file

Exit codes: 0 success, 1 input error, 2 divergent simulation, 3 condition
fails. Batches (repeated --scenario) exit with the most severe code, ranked
1 > 2 > 3 > 0.

Usage:
    python -m src.cli simulate --scenario example2.json --out-dir out
    python -m src.cli certify --scenario example1.json --variant corollary2
    python -m src.cli bound --sigma 1.2 --sigma0 1.44 --rho 0.9 --sup-l 4.8839
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ..certificates import (
    CertificateInputs,
    CertificateVariant,
    bound_document,
    compare_conditions,
    dump_certificate_inputs,
    inputs_from_document,
    run_certificate,
)
from ..config import settings, setup_logging
from ..exceptions import FrozenTimeError, InputError
from ..simulator import (
    Scenario,
    build_example1,
    build_example2,
    collect_certificate_inputs,
    dump_scenario,
    random_stable_scenario,
    run_batch,
    scenario_from_document,
    simulate,
    verify_gain_bound,
)
from ..utils import to_json_text, write_frame, write_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DIVERGED = 2
EXIT_FAILS = 3

# Batch exit code: most severe first
SEVERITY = (EXIT_INPUT, EXIT_DIVERGED, EXIT_FAILS, EXIT_OK)

EXAMPLES = {
    "example1": build_example1,
    "example2": build_example2,
    "random": random_stable_scenario,
}


def most_severe(codes: Sequence[int]) -> int:
    for code in SEVERITY:
        if code in codes:
            return code
    return EXIT_OK


# -----------------------------------------------------------------------------
# Input loading
# -----------------------------------------------------------------------------

def _read_document(path: Path) -> Dict[str, Any]:
    if not path.exists():
        raise InputError(f"File not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise InputError(f"{path} must hold a JSON object")
    return data


def _scenario_overrides(data: Dict[str, Any], args: argparse.Namespace) -> Dict[str, Any]:
    """Apply --sigma/--sigma0/--rho/--n-width/--max-gap/--seed to a scenario document."""
    data = dict(data)
    for flag, key in (("sigma", "sigma"), ("sigma0", "sigma0"), ("rho", "rho"),
                      ("n_width", "n_width"), ("max_gap", "max_gap")):
        value = getattr(args, flag, None)
        if value is not None:
            data[key] = value
    if getattr(args, "seed", None) is not None:
        if isinstance(data.get("example"), dict):
            data["example"] = {**data["example"], "seed": args.seed}
            data.pop("name", None)
        else:
            data["seed"] = args.seed
    return data


def load_scenario_file(path: Union[str, Path], args: argparse.Namespace) -> Scenario:
    path = Path(path)
    return scenario_from_document(_scenario_overrides(_read_document(path), args), name=path.stem)


def load_certificate_source(
    path: Union[str, Path],
    args: argparse.Namespace
) -> Tuple[CertificateInputs, Optional[Scenario]]:
    """
    Certificate inputs from a scenario file or a precomputed inputs file.

    The file's `document` field tells the two apart.
    """
    path = Path(path)
    data = _read_document(path)
    if data.get("document") == "certificate_inputs":
        if args.sigma is not None or args.sigma0 is not None:
            raise InputError("--sigma/--sigma0 cannot override precomputed certificate inputs")
        if getattr(args, "seed", None) is not None:
            raise InputError("--seed has no effect on precomputed certificate inputs")
        inputs = inputs_from_document(data)
        if args.rho is not None:
            inputs = replace(inputs, rho=args.rho)
        return inputs, None

    s = scenario_from_document(_scenario_overrides(data, args), name=path.stem)
    return collect_certificate_inputs(s), s


def _out_dir(args: argparse.Namespace, path: Union[str, Path]) -> Path:
    return Path(args.out_dir or settings.out_dir) / Path(path).stem


def _guarded(job):
    """Map FrozenTimeError to exit code 1 for one batch item."""
    def run(path):
        try:
            return job(path)
        except FrozenTimeError as e:
            logger.error(f"{path}: {e}")
            return EXIT_INPUT
    return run


# -----------------------------------------------------------------------------
# Commands
# -----------------------------------------------------------------------------

def _cmd_simulate(args: argparse.Namespace) -> int:
    def job(path) -> int:
        s = load_scenario_file(path, args)
        result = simulate(s)
        out = _out_dir(args, path)
        for stem, frame in result.frames().items():
            write_frame(out / f"{stem}.csv", frame)
        write_json(out / "summary.json", result.summary())
        logger.info(f"Wrote simulation outputs to {out}")
        return EXIT_DIVERGED if result.diverged else EXIT_OK

    return most_severe(run_batch(args.scenario, _guarded(job), args.threads))


def _cmd_certify(args: argparse.Namespace) -> int:
    def job(path) -> int:
        inputs, s = load_certificate_source(path, args)
        max_gap = args.max_gap or (s.max_gap if s is not None else None)
        N = args.n_width or (s.n_width if s is not None else None)
        report = run_certificate(inputs, args.variant, N=N, max_gap=max_gap, strict=True)

        document = report.to_dict()
        if s is not None and report.gain_claimed:
            result = simulate(s)
            at = None
            if report.variant in (CertificateVariant.THEOREM1, CertificateVariant.COROLLARY1):
                at = list(report.time_sequence.times[1:])
            check = verify_gain_bound(result, report.gain_bound, at)
            document["gain_check"] = {
                "ok": check.ok,
                "worst_ratio": check.worst_ratio,
                "worst_t": check.worst_t,
                "checked": check.checked,
                "skipped": len(check.skipped),
            }

        out = _out_dir(args, path)
        write_json(out / "report.json", document)
        write_frame(out / "margins.csv", report.margins_frame())
        if s is not None:
            dump_certificate_inputs(inputs, out / "inputs.json")
        verdict = "holds" if report.holds else "fails"
        print(f"{Path(path).stem}: {report.variant.value} {verdict} (gain bound {report.gain_bound:.6g})")
        return EXIT_OK if report.holds else EXIT_FAILS

    return most_severe(run_batch(args.scenario, _guarded(job), args.threads))


def _cmd_compare(args: argparse.Namespace) -> int:
    def job(path) -> int:
        inputs, s = load_certificate_source(path, args)
        max_gap = args.max_gap or (s.max_gap if s is not None else None)
        N = args.n_width or (s.n_width if s is not None else None)
        table = compare_conditions(inputs, N, max_gap)
        out = _out_dir(args, path)
        write_json(out / "comparison.json", table.to_dict())
        write_frame(out / "comparison.csv", table.to_frame())
        print(table.to_frame().to_string(index=False))
        return EXIT_OK if table.any_holds else EXIT_FAILS

    return most_severe(run_batch(args.scenario, _guarded(job), args.threads))


def _cmd_bound(args: argparse.Namespace) -> int:
    try:
        document = bound_document(
            args.sup_l,
            settings.sigma if args.sigma is None else args.sigma,
            settings.sigma0 if args.sigma0 is None else args.sigma0,
            settings.rho if args.rho is None else args.rho,
            args.n_width or 1,
            args.controller_factor_norm,
        )
    except FrozenTimeError as e:
        logger.error(str(e))
        return EXIT_INPUT
    print(to_json_text(document))
    if args.out_dir:
        write_json(Path(args.out_dir) / "bound.json", document)
    return EXIT_OK


def _cmd_gen_example(args: argparse.Namespace) -> int:
    params: Dict[str, Any] = {}
    for key in ("sigma", "sigma0", "rho"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    if args.horizon is not None:
        params["horizon"] = args.horizon
    try:
        s = EXAMPLES[args.example](args.seed or 0, **params)
        if args.n_width is not None or args.max_gap is not None:
            s = replace(s, n_width=args.n_width or s.n_width, max_gap=args.max_gap or s.max_gap)
    except FrozenTimeError as e:
        logger.error(str(e))
        return EXIT_INPUT

    path = Path(args.out_dir or settings.out_dir) / f"{s.name}.json"
    dump_scenario(s, path, explicit=args.explicit)
    print(f"Wrote {path}")
    return EXIT_OK


# -----------------------------------------------------------------------------
# Parser
# -----------------------------------------------------------------------------

def _add_parameters(p: argparse.ArgumentParser):
    p.add_argument("--sigma", type=float, default=None, help="Signal weight sigma (>= 1)")
    p.add_argument("--sigma0", type=float, default=None, help="Degree of stability sigma0 (> sigma)")
    p.add_argument("--rho", type=float, default=None, help="Contraction rate rho in (0, 1)")
    p.add_argument("--n-width", dest="n_width", type=int, default=None, help="Averaging width N")
    p.add_argument("--out-dir", dest="out_dir", default=None, help=f"Output directory (default {settings.out_dir})")


def _add_scenarios(p: argparse.ArgumentParser):
    p.add_argument("--scenario", action="append", required=True,
                   help="Scenario or certificate-inputs JSON file (repeat for a batch)")
    p.add_argument("--seed", type=int, default=None, help="Override the scenario seed")
    p.add_argument("--max-gap", dest="max_gap", type=int, default=None, help="Longest proposed window")
    p.add_argument("--threads", type=int, default=None, help="Batch threads (default FROZEN_TIME_THREADS)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frozen-time",
        description="Frozen-time stability certificates for time-varying feedback loops",
    )
    parser.add_argument("--log-level", default=None, help="Override FROZEN_TIME_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="Simulate scenarios")
    _add_scenarios(p_sim)
    _add_parameters(p_sim)
    p_sim.set_defaults(func=_cmd_simulate)

    p_cert = sub.add_parser("certify", help="Evaluate one certificate variant")
    _add_scenarios(p_cert)
    _add_parameters(p_cert)
    p_cert.add_argument("--variant", default=CertificateVariant.COROLLARY2.value,
                        choices=[v.value for v in CertificateVariant])
    p_cert.set_defaults(func=_cmd_certify)

    p_cmp = sub.add_parser("compare", help="Compare every condition with the per-step baseline")
    _add_scenarios(p_cmp)
    _add_parameters(p_cmp)
    p_cmp.set_defaults(func=_cmd_compare)

    p_bound = sub.add_parser("bound", help="Tolerable variation bounds")
    _add_parameters(p_bound)
    p_bound.add_argument("--sup-l", dest="sup_l", type=float, required=True,
                         help="sup_t ||l_t||_{sigma0 inf} ('inf' allowed)")
    p_bound.add_argument("--controller-factor-norm", dest="controller_factor_norm", type=float, default=None,
                         help="Controller factor norm for the adaptive plant bound")
    p_bound.set_defaults(func=_cmd_bound)

    p_gen = sub.add_parser("gen-example", help="Write an example scenario file")
    p_gen.add_argument("--example", choices=sorted(EXAMPLES), default="example2")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--horizon", type=int, default=None)
    p_gen.add_argument("--max-gap", dest="max_gap", type=int, default=None)
    p_gen.add_argument("--explicit", action="store_true", help="Write every matrix instead of the generator reference")
    _add_parameters(p_gen)
    p_gen.set_defaults(func=_cmd_gen_example)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors; that code means divergence here
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    setup_logging(args.log_level)

    try:
        return int(args.func(args))
    except FrozenTimeError as e:
        logger.error(str(e))
        return EXIT_INPUT
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
