"""Command-line front end.

    gwspin scenario <config.json> [--out file.csv]
    gwspin swap-ladder <config.json> [--depth n] [--out file.csv]
    gwspin sweep <config.json> --param waveform.amplitude --values 1e-3,1e-2 [--out file.csv]
    gwspin validate [--level quick|full]

Exit status: 0 success, 1 configuration/validation error, 2 numerical failure.
The worker-thread count for scenario rows comes from GWSPIN_THREADS.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import load_config
from .errors import ConfigError, GwspinError
from .runner import run_scenario, run_sweep, run_swap_ladder, to_csv
from .validation import report, run_validation

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_values(raw: str) -> list:
    values = []
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(json.loads(item))
        except json.JSONDecodeError:
            values.append(item)
    if not values:
        raise ConfigError("--values: empty list")
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gwspin", description="Gravitational-wave spin decoherence simulator.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scenario", help="proper-time sweep of one scenario as CSV")
    s.add_argument("config")
    s.add_argument("--out", help="output CSV path (default: stdout)")

    s = sub.add_parser("swap-ladder", help="entanglement-swapping ladder at the peak-deficit proper time")
    s.add_argument("config")
    s.add_argument("--depth", type=int, help="ladder depth (default: config swap_depth)")
    s.add_argument("--out")

    s = sub.add_parser("sweep", help="repeat a scenario over values of one parameter")
    s.add_argument("config")
    s.add_argument("--param", required=True, help="dotted path, e.g. waveform.amplitude")
    s.add_argument("--values", required=True, help="comma-separated JSON scalars")
    s.add_argument("--out")

    s = sub.add_parser("validate", help="run the invariant suites")
    s.add_argument("--level", choices=("quick", "full"), default="quick")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            checks = run_validation(args.level)
            print(report(checks))
            return EXIT_OK if all(c.passed for c in checks) else EXIT_CONFIG
        cfg = load_config(args.config)
        if args.command == "scenario":
            header, rows = run_scenario(cfg)
        elif args.command == "swap-ladder":
            if args.depth is not None and args.depth < 0:
                raise ConfigError("--depth: must be >= 0")
            header, rows = run_swap_ladder(cfg, args.depth)
        else:
            header, rows = run_sweep(cfg, args.param, _parse_values(args.values))
        _emit(to_csv(header, rows), args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GwspinError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
