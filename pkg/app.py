#!/usr/bin/env python3
"""
Moser-Trudinger Lab - Command-Line Launcher
===========================================

Front end for every experiment and verifier. Tables go to stdout (or --out)
as CSV or JSON; diagnostics go to stderr.

Exit codes: 0 success, 1 failed trend checks (the table is still emitted),
2 usage error, 3 domain or precondition violation or a numerical failure
(overflow, unusable quadrature), in which case the rows finished before it
are still emitted.
"""

import argparse
import logging
import sys
import traceback
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import numpy as np
import pandas as pd

# Add current directory to Python path
sys.path.insert(0, str(Path(__file__).parent))

from config import LabConfig, get_config
from mtlab.constants import ExponentPair, paper_constants
from mtlab.errors import DomainViolation, EvaluationOverflow, LabError, PreconditionViolation, QuadratureFailure
from mtlab.experiments import (
    DEFAULT_N_VALUES,
    DEFAULT_S_VALUES,
    SUITES,
    limit_grid,
    pointwise_limit_study,
    semicontinuity_study,
    sweep_concentration,
    sweep_mp_limit,
    two_bubble_study,
    verify_suite,
)
from mtlab.maximizer import MaximizerConfig, maximize
from mtlab.radial import QuadratureSpec
from mtlab.reports import ExperimentReport, frame_to_csv, frame_to_json

EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

CONSTANTS_COLUMNS = ["N", "p", "p_star", "p_conj", "gamma_exp", "vol_B", "omega", "alpha_N", "alpha_p",
                     "S_p", "M_p", "M_p_gamma_form", "cc_limit", "prop21_valid"]
MAXIMIZE_COLUMNS = ["start", "value", "iterations", "outcome", "winner", "best_w_eps", "M_p", "exceeds_M_p"]

logger = logging.getLogger(__name__)


# -- argument types ------------------------------------------------------------------

def grid_spec(text: str) -> tuple:
    """a:b:count with a < b and count >= 2"""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a:b:count, got {text!r}")
    try:
        a, b, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b:count with numbers, got {text!r}")
    if count < 2:
        raise argparse.ArgumentTypeError(f"grid needs count >= 2, got {count}")
    if not a < b:
        raise argparse.ArgumentTypeError(f"grid needs a < b, got {a!r}:{b!r}")
    return a, b, count


def number_list(text: str) -> List[float]:
    """Comma-separated numbers, or a:b:count spaced geometrically"""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            a, b, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1 or a <= 0 or b <= 0:
                raise ValueError
            return [float(x) for x in np.geomspace(a, b, count)]
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list or a:b:count, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def p_grid(N: int, spec: tuple) -> List[float]:
    """Exponents from a to b spaced geometrically in N - p"""
    a, b, count = spec
    if not b < N:
        raise DomainViolation(f"p-grid must stay below N = {N}, got b = {b!r}")
    grid = N - np.geomspace(N - a, N - b, count)
    grid[0], grid[-1] = a, b
    return [float(p) for p in grid]


# -- helpers ---------------------------------------------------------------------------

def quadrature_from(args: argparse.Namespace, cfg: LabConfig) -> QuadratureSpec:
    base = cfg.quadrature()
    return QuadratureSpec(
        panels=args.panels if args.panels is not None else base.panels,
        nodes_per_panel=args.order if args.order is not None else base.nodes_per_panel,
        grading=args.grading if args.grading is not None else base.grading,
        cutoff=base.cutoff,
    )


def frame_of(rows: Sequence[dict], columns: List[str]) -> pd.DataFrame:
    """Row dicts to a frame; None becomes NaN"""
    cleaned = [{key: (np.nan if value is None else value) for key, value in row.items()} for row in rows]
    return pd.DataFrame(cleaned, columns=columns)


def emit(frame: pd.DataFrame, fmt: str, out: Optional[str]):
    text = frame_to_json(frame) if fmt == "json" else frame_to_csv(frame)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"💾 Wrote {len(frame)} rows to {out}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def report_result(report: ExperimentReport) -> tuple:
    return report.to_frame(), report.passed


# -- subcommands ------------------------------------------------------------------------

def cmd_constants(args: argparse.Namespace, cfg: LabConfig) -> tuple:
    consts = paper_constants(ExponentPair(args.dim, args.p))
    return frame_of([consts.as_row()], CONSTANTS_COLUMNS), True


def cmd_sweep_mp(args: argparse.Namespace, cfg: LabConfig) -> tuple:
    return report_result(sweep_mp_limit(args.dim, p_grid(args.dim, args.p_grid), workers=cfg.workers))


def cmd_concentrate(args: argparse.Namespace, cfg: LabConfig) -> tuple:
    epsilons = args.epsilons if args.epsilons is not None else list(cfg.default_epsilons)
    report = sweep_concentration(ExponentPair(args.dim, args.p), epsilons,
                                 quadrature_from(args, cfg), workers=cfg.workers)
    return report_result(report)


def cmd_verify(args: argparse.Namespace, cfg: LabConfig) -> tuple:
    report = verify_suite(args.suite, args.trials, args.seed,
                          quad=quadrature_from(args, cfg), workers=cfg.workers)
    return report_result(report)


def cmd_maximize(args: argparse.Namespace, cfg: LabConfig) -> tuple:
    mcfg = MaximizerConfig(knots=args.knots, max_iters=args.iters, seed=args.seed)
    result = maximize(ExponentPair(args.dim, args.p), mcfg, quadrature_from(args, cfg), workers=cfg.workers)
    # an excess over M_p is a finding, not a failure
    return frame_of(result.as_rows(), MAXIMIZE_COLUMNS), True


def cmd_two_bubble(args: argparse.Namespace, cfg: LabConfig) -> tuple:
    report = two_bubble_study(ExponentPair(args.dim, args.p), args.n_values,
                              quadrature_from(args, cfg), workers=cfg.workers)
    return report_result(report)


def cmd_limit_f(args: argparse.Namespace, cfg: LabConfig) -> tuple:
    grid = p_grid(args.dim, args.p_grid) if args.p_grid else limit_grid(args.dim, range(1, 7))
    report = pointwise_limit_study(args.dim, args.s_values, grid,
                                   quad=quadrature_from(args, cfg), workers=cfg.workers)
    return report_result(report)


def cmd_semicontinuity(args: argparse.Namespace, cfg: LabConfig) -> tuple:
    grid = p_grid(args.dim, args.p_grid) if args.p_grid else limit_grid(args.dim, range(1, 6))
    report = semicontinuity_study(args.dim, grid, quad=quadrature_from(args, cfg), workers=cfg.workers)
    return report_result(report)


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mtlab", description="Moser-Trudinger approximation lab")
    parser.add_argument("--log-level", choices=["debug", "info", "warning", "error"],
                        help="Diagnostic verbosity on stderr")

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", choices=["csv", "json"], help="Table format (default from LAB_FORMAT)")
    output.add_argument("--out", help="Write the table to this file instead of stdout")

    mesh = argparse.ArgumentParser(add_help=False)
    mesh.add_argument("--panels", type=int, help="Number of graded panels")
    mesh.add_argument("--order", type=int, help="Gauss-Legendre nodes per panel")
    mesh.add_argument("--grading", type=float, help="Mesh grading exponent toward r = 0")

    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable, help_text: str, parents: list,
            dim: bool = True) -> argparse.ArgumentParser:
        command = sub.add_parser(name, help=help_text, parents=parents)
        command.set_defaults(handler=handler)
        if dim:
            command.add_argument("--dim", type=int, required=True, help="Dimension N")
        return command

    command = add("constants", cmd_constants, "Closed-form constants for one (N, p)", [output])
    command.add_argument("--p", type=float, required=True)

    command = add("sweep-mp", cmd_sweep_mp, "M_p against the Carleson-Chang limit", [output])
    command.add_argument("--p-grid", type=grid_spec, required=True, help="a:b:count, geometric in N - p")

    command = add("concentrate", cmd_concentrate, "Modified bubbles as eps -> 0", [output, mesh])
    command.add_argument("--p", type=float, required=True)
    command.add_argument("--epsilons", type=number_list, help="Comma list or a:b:count")

    command = add("verify", cmd_verify, "Randomized inequality suites", [output, mesh], dim=False)
    command.add_argument("--suite", choices=SUITES, required=True)
    command.add_argument("--trials", type=int, default=1000)
    command.add_argument("--seed", type=int, default=0)

    command = add("maximize", cmd_maximize, "Multi-start search for sup int F_p", [output, mesh])
    command.add_argument("--p", type=float, required=True)
    command.add_argument("--knots", type=int, default=32)
    command.add_argument("--iters", type=int, default=200)
    command.add_argument("--seed", type=int, default=0)

    command = add("two-bubble", cmd_two_bubble, "Two-bubble splitting of the L^p* mass", [output, mesh])
    command.add_argument("--p", type=float, required=True)
    command.add_argument("--n-values", type=number_list, default=list(DEFAULT_N_VALUES))

    command = add("limit-f", cmd_limit_f, "F_p against the Moser-Trudinger integrand", [output, mesh])
    command.add_argument("--s-values", type=number_list, default=list(DEFAULT_S_VALUES))
    command.add_argument("--p-grid", type=grid_spec, help="a:b:count (default p = N - 10^-k, k = 1..6)")

    command = add("semicontinuity", cmd_semicontinuity, "Rescaled functional on the W^{1,N} unit ball",
                  [output, mesh])
    command.add_argument("--p-grid", type=grid_spec, help="a:b:count (default p = N - 10^-k, k = 1..5)")
    return parser


def setup_error_handling():
    """Setup global exception handling"""
    def handle_exception(exc_type, exc_value, exc_traceback):
        if issubclass(exc_type, KeyboardInterrupt):
            sys.__excepthook__(exc_type, exc_value, exc_traceback)
            return

        logger = logging.getLogger(__name__)
        logger.critical("❌ Uncaught exception:",
                        exc_info=(exc_type, exc_value, exc_traceback))

    sys.excepthook = handle_exception


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    setup_error_handling()
    try:
        cfg = get_config()
    except ValueError as e:
        print(f"❌ Configuration failed: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.log_level:
        logging.getLogger().setLevel(args.log_level.upper())
    cfg.log_configuration()

    fmt = args.format or cfg.output_format
    try:
        frame, passed = args.handler(args, cfg)
    except (DomainViolation, PreconditionViolation) as e:
        logger.error(f"❌ {args.command}: {e}")
        return EXIT_DOMAIN
    except (EvaluationOverflow, QuadratureFailure) as e:
        logger.error(f"❌ {args.command}: {e}")
        if e.partial is not None and e.partial.rows:
            emit(e.partial.to_frame(), fmt, args.out)
            logger.warning(f"⚠️ {args.command}: emitted the {len(e.partial.rows)} rows computed before the failure")
        return EXIT_DOMAIN
    except LabError as e:
        logger.error(f"❌ {args.command} failed: {e}")
        logger.debug(traceback.format_exc())
        return EXIT_FAILED_CHECKS

    emit(frame, fmt, args.out)
    if not passed:
        logger.warning(f"⚠️ {args.command}: trend checks failed; table emitted")
        return EXIT_FAILED_CHECKS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
