"""Command line interface.

Three subcommands: ``teleport`` runs one scenario and writes its branch
table, ``sweep`` scans the tap strength, ``verify`` runs the built-in
identity checks.  Exit codes: 0 success, 1 invalid configuration or
arguments, 2 violated invariant or failed verification, 3 input/output
failure.
"""
from __future__ import annotations

import argparse
import sys
from typing import IO

from .config import ConfigError, load_config
from .runner import DEFAULT_RUN_TOL, InvariantViolation, run_sweep, run_teleport
from .verify import run_verification

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INVARIANT = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teleportsim",
        description="Finite-dimensional teleportation simulator with channel effects",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    teleport = sub.add_parser("teleport", help="run one scenario and write its branch table")
    _add_run_arguments(teleport)

    sweep = sub.add_parser("sweep", help="scan tap strength against fidelity and leakage")
    _add_run_arguments(sweep)
    sweep.add_argument("--workers", type=int, default=1, help="concurrent sweep points")

    verify = sub.add_parser("verify", help="run the built-in identity checks")
    verify.add_argument(
        "depth", nargs="?", choices=("quick", "full"), default="quick",
        help="workload size (default quick)",
    )
    verify.add_argument("--seed", type=int, default=0, help="seed for random scenarios")
    verify.add_argument("--workers", type=int, default=1, help="concurrent checks")
    verify.add_argument(
        "--corrupt", choices=("bell", "measurement"), default=None,
        help="deliberately inject a defective family (testing hook)",
    )
    return parser


def _add_run_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", required=True, help="YAML/JSON run specification")
    sub.add_argument("--output", default=None, help="CSV destination (default stdout)")
    sub.add_argument("--seed", type=int, default=None, help="override the config seed")
    sub.add_argument(
        "--strict", action="store_true",
        help="reject unnormalized inputs instead of normalizing",
    )
    sub.add_argument(
        "--tolerance", type=float, default=DEFAULT_RUN_TOL,
        help="route agreement tolerance (default %(default)g)",
    )


def _open_output(path: str | None) -> tuple[IO[str], bool]:
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            report = run_verification(
                depth=args.depth, seed=args.seed, workers=args.workers, corrupt=args.corrupt
            )
            for line in report.lines():
                print(line)
            return EXIT_OK if report.passed else EXIT_INVARIANT

        spec = load_config(args.config, strict=args.strict)
        if args.seed is not None:
            spec = _override_seed(spec, args.seed)
        output_path = args.output if args.output is not None else spec.output_path
        stream, owned = _open_output(output_path)
        try:
            if args.command == "teleport":
                summary = run_teleport(spec, stream, tolerance=args.tolerance)
            else:
                summary = run_sweep(
                    spec, stream, tolerance=args.tolerance, workers=args.workers
                )
        finally:
            if owned:
                stream.close()
        for line in summary:
            print(line, file=sys.stderr)
        return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _override_seed(spec, seed: int):
    from dataclasses import replace

    return replace(spec, seed=seed)


if __name__ == "__main__":
    raise SystemExit(main())
