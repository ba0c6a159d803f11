"""Command-line front end.

Subcommands: verify (full certification suite), figures (regenerate the six
standard CSV data files), conjecture (complete-monotonicity evidence scan).
Exit codes: 0 all checks pass, 1 a verified claim failed, 2 bad configuration,
3 internal or precision error.
"""

from __future__ import annotations

import argparse
import sys

from .backend import PRECISION_ENV
from .errors import ConfigError, PrecisionExhaustedError, ThetakitError
from .quotients import K_MAX
from .suite import (DEFAULT_UV_PAIRS, FIGURE_T_COUNT, RunConfig, run_conjecture,
                    run_figures, run_verify)

EXIT_PASS = 0
EXIT_VERIFICATION_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_INTERNAL_ERROR = 3


def _parse_uv(text: str):
    try:
        u, v = (float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'u,v', got {text!r}")
    return (u, v)


def _add_common_flags(p: argparse.ArgumentParser, t_count_default: int):
    p.add_argument("--t-lo", type=float, default=0.05, help="lower end of the t grid")
    p.add_argument("--t-hi", type=float, default=5.0, help="upper end of the t grid")
    p.add_argument("--t-count", type=int, default=t_count_default,
                   help="number of t grid points")
    p.add_argument("--t-spacing", choices=("log", "linear"), default="log")
    p.add_argument("--uv", type=_parse_uv, action="append", default=None,
                   metavar="U,V", help="quotient arguments; repeatable")
    p.add_argument("--x-grid", type=int, default=512, dest="x_grid",
                   help="points per x scan")
    p.add_argument("--delta", type=float, default=1e-3, help="interval edge margin")
    p.add_argument("--tol", type=float, default=1e-12, help="series tail tolerance")
    p.add_argument("--order-k", type=int, default=6, dest="order_k",
                   help=f"highest conjecture derivative order (max {K_MAX})")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", action="append", choices=("csv", "json"),
                   default=None, help="output formats; repeatable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetakit",
        description="Certify the sign, root, limit and convexity claims of the "
                    "theta-quotient machinery, and regenerate figure data.",
        epilog=f"Environment: {PRECISION_ENV}=double|extended selects the "
               "accumulation mode.")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common_flags(sub.add_parser("verify", help="run the verification suite"), 50)
    _add_common_flags(sub.add_parser("figures", help="emit the six CSV data files"),
                      FIGURE_T_COUNT)
    _add_common_flags(sub.add_parser("conjecture",
                                     help="complete-monotonicity evidence scan"), 50)
    return parser


def config_from_args(args) -> RunConfig:
    uv_pairs = tuple(args.uv) if args.uv else DEFAULT_UV_PAIRS
    formats = tuple(dict.fromkeys(args.format)) if args.format else ("csv", "json")
    return RunConfig(t_lo=args.t_lo, t_hi=args.t_hi, t_count=args.t_count,
                     t_spacing=args.t_spacing, uv_pairs=uv_pairs,
                     x_grid_n=args.x_grid, delta=args.delta, tol=args.tol,
                     K=args.order_k, output_dir=args.out, formats=formats)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    try:
        if args.command == "figures":
            for path in run_figures(config):
                print(path)
            return EXIT_PASS
        report = run_verify(config) if args.command == "verify" else run_conjecture(config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (PrecisionExhaustedError, ThetakitError, ArithmeticError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR
    for check in report.checks:
        print(f"[{check.status.upper():4s}] {check.check_id}: {check.claim}")
    print(f"global status: {report.global_status}")
    return EXIT_PASS if report.global_status == "pass" else EXIT_VERIFICATION_FAILURE


if __name__ == "__main__":
    sys.exit(main())
