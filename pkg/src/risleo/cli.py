"""Command-line interface: validate scenario files, run them, batch them.

Exit codes: 0 success, 2 I/O failure, 3 schema or configuration problem,
4 simulation contract violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from .engine import run_scenario
from .reporting import write_results
from .scenario import ScenarioValidationError, load_scenario

EXIT_OK = 0
EXIT_IO = 2
EXIT_INVALID = 3
EXIT_SIM = 4

WORKERS_ENV_VAR = "RISLEO_WORKERS"


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default="out", help="output directory (default: ./out)")
    parser.add_argument("--seed", type=int, default=None, help="override the scenario master seed")
    parser.add_argument(
        "--workers",
        type=int,
        default=None,
        help=f"worker process count (default: ${WORKERS_ENV_VAR} or 1)",
    )
    parser.add_argument(
        "--subcarrier-samples",
        type=int,
        default=None,
        dest="subcarrier_samples",
        help="override the number of subcarrier samples per trial",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risleo",
        description="Link-level Monte Carlo simulator for RIS-assisted LEO downlinks.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="check a scenario file without running it")
    validate.add_argument("scenario", help="path to a scenario YAML file")

    run = commands.add_parser("run", help="simulate one scenario and write results.csv")
    run.add_argument("scenario", help="path to a scenario YAML file")
    _add_run_flags(run)

    sweep = commands.add_parser("sweep", help="simulate several scenarios into one output tree")
    sweep.add_argument("scenarios", nargs="+", help="paths to scenario YAML files")
    _add_run_flags(sweep)

    return parser


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _resolve_workers(flag_value):
    if flag_value is not None:
        workers = flag_value
    else:
        raw = os.environ.get(WORKERS_ENV_VAR, "1")
        try:
            workers = int(raw)
        except ValueError:
            raise ValueError(f"{WORKERS_ENV_VAR} must be an integer, got {raw!r}")
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    return workers


def _load(path: str):
    """Returns (config, exit_code); config is None on failure."""
    try:
        cfg = load_scenario(path)
    except ScenarioValidationError as exc:
        for line in exc.diagnostics:
            print(f"error: {path}: {line}", file=sys.stderr)
        return None, EXIT_INVALID
    except OSError as exc:
        return None, _fail(EXIT_IO, f"cannot read {path}: {exc}")
    return cfg, EXIT_OK


def _now_utc() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _run_one(path: str, out_dir: Path, args) -> int:
    cfg, code = _load(path)
    if cfg is None:
        return code

    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.subcarrier_samples is not None:
        overrides["subcarrier_samples"] = args.subcarrier_samples
    if overrides:
        try:
            cfg = dataclasses.replace(cfg, **overrides)
        except ValueError as exc:
            return _fail(EXIT_INVALID, str(exc))

    try:
        workers = _resolve_workers(args.workers)
    except ValueError as exc:
        return _fail(EXIT_INVALID, str(exc))

    started = _now_utc()
    try:
        result = run_scenario(cfg, workers=workers)
    except ValueError as exc:
        return _fail(EXIT_SIM, f"simulation contract violation: {exc}")
    finished = _now_utc()

    try:
        csv_path, manifest_path = write_results(result, cfg, out_dir, workers, started, finished)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write results to {out_dir}: {exc}")
    print(csv_path)
    print(manifest_path)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "validate":
        cfg, code = _load(args.scenario)
        if cfg is None:
            return code
        print(f"ok: {args.scenario}")
        return EXIT_OK

    if args.command == "run":
        return _run_one(args.scenario, Path(args.out), args)

    # sweep: one subdirectory per scenario file, stop at the first failure
    for path in args.scenarios:
        out_dir = Path(args.out) / Path(path).stem
        code = _run_one(path, out_dir, args)
        if code != EXIT_OK:
            return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
