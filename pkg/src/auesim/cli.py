"""Command line front end.

Two subcommands share one set of system flags: ``run`` simulates the base
configuration as a single point, ``sweep`` varies one axis over a list of
values.  Results go to stdout or ``--out`` as CSV or JSON.  Exit codes:
0 success, 2 bad configuration or arguments, 3 estimator domain error.
"""

from __future__ import annotations

import argparse
import sys
from typing import IO, Sequence

from .estimators import EstimatorDomainError, Scheme
from .harness import (
    DEFAULT_TRIALS,
    ExperimentConfig,
    SweepAxis,
    SweepSpec,
    run_sweep,
    snr_db_to_noise_variance,
    write_csv,
    write_json,
)
from .model import CfoKind, CfoModel, SystemConfig

_DEFAULT_SCHEMES = "eig-sum,eig-diff,orthogonal,mle"


def _parse_schemes(text: str) -> tuple[Scheme, ...]:
    names = [part.strip().lower().replace("_", "-") for part in text.split(",") if part.strip()]
    if not names:
        raise argparse.ArgumentTypeError("at least one scheme is required")
    schemes: list[Scheme] = []
    for name in names:
        try:
            scheme = Scheme(name)
        except ValueError:
            known = ", ".join(s.value for s in Scheme)
            raise argparse.ArgumentTypeError(f"unknown scheme '{name}' (known: {known})") from None
        if scheme in schemes:
            raise argparse.ArgumentTypeError(f"scheme '{name}' listed twice")
        schemes.append(scheme)
    return tuple(schemes)


def _parse_values(text: str) -> tuple[float, ...]:
    parts = [part.strip() for part in text.split(",") if part.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("at least one axis value is required")
    try:
        return tuple(float(part) for part in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad axis value in '{text}'") from exc


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="auesim",
        description="Monte Carlo NRMSE of covariance-based active-user counting schemes.",
    )
    common = argparse.ArgumentParser(add_help=False)
    system = common.add_argument_group("system")
    system.add_argument("--n", type=_positive_int, default=100, help="population size (default 100)")
    system.add_argument("--k", type=_positive_int, default=25, help="active users (default 25)")
    system.add_argument("--m", type=_positive_int, default=32, help="receive antennas (default 32)")
    system.add_argument("--snr-db", type=float, default=10.0, help="per-user SNR in dB (default 10)")
    system.add_argument(
        "--eps-max", type=float, default=0.15, help="worst-case normalized CFO (default 0.15)"
    )
    system.add_argument(
        "--cfo",
        choices=[CfoKind.UNIFORM.value, CfoKind.GAUSSIAN.value],
        default=CfoKind.UNIFORM.value,
        help="CFO distribution (default uniform); --eps-max 0 disables offsets",
    )
    runner = common.add_argument_group("experiment")
    runner.add_argument(
        "--schemes",
        type=_parse_schemes,
        default=_parse_schemes(_DEFAULT_SCHEMES),
        help=f"comma list of schemes (default {_DEFAULT_SCHEMES})",
    )
    runner.add_argument(
        "--trials", type=_positive_int, default=DEFAULT_TRIALS,
        help=f"Monte Carlo trials per point (default {DEFAULT_TRIALS})",
    )
    runner.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    runner.add_argument(
        "--theory", action="store_true", help="attach the closed-form eig-sum NRMSE column"
    )
    runner.add_argument(
        "--workers", type=_positive_int, default=1,
        help="worker processes (default 1; results do not depend on this)",
    )
    output = common.add_argument_group("output")
    output.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
    output.add_argument("--format", choices=["csv", "json"], default="csv", help="output format")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("run", parents=[common], help="simulate the base configuration")
    sweep = commands.add_parser("sweep", parents=[common], help="vary one axis over a value list")
    sweep.add_argument(
        "--axis",
        choices=[a.value for a in SweepAxis if a is not SweepAxis.NONE],
        required=True,
        help="system parameter to sweep",
    )
    sweep.add_argument(
        "--values", type=_parse_values, required=True, help="comma list of axis values"
    )
    return parser


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    cfo = CfoModel(kind=CfoKind(args.cfo), epsilon_max=args.eps_max)
    base = SystemConfig(
        n_potential=args.n,
        k_active=args.k,
        m_antennas=args.m,
        noise_variance=snr_db_to_noise_variance(args.snr_db),
        cfo=cfo,
    )
    if args.command == "sweep":
        spec = SweepSpec(axis=SweepAxis(args.axis), values=args.values)
    else:
        spec = SweepSpec.single_point()
    return ExperimentConfig(
        base=base,
        schemes=args.schemes,
        trials=args.trials,
        master_seed=args.seed,
        sweep=spec,
        emit_theory=args.theory,
    )


def _dump(result, stream: IO[str], fmt: str) -> None:
    if fmt == "csv":
        write_csv(result, stream)
    else:
        write_json(result, stream)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _build_config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        result = run_sweep(config, workers=args.workers)
    except EstimatorDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if args.out == "-":
        _dump(result, sys.stdout, args.format)
    else:
        newline = "" if args.format == "csv" else None
        with open(args.out, "w", newline=newline) as stream:
            _dump(result, stream, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
