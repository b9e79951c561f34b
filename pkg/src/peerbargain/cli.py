"""Command-line front door: scenarios, sweeps, tables, dataset checks, serving.

Results go to stdout (or ``--out``); diagnostics go to stderr only.  Exit
codes: 0 success, 1 usage error, 2 dataset/spec validation failure, 3 runtime
error.  Identical invocations produce byte-identical stdout.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional

from . import scenario as scenario_mod
from .dataset import DatasetError, load_dataset, serialize_dataset, validate_dataset
from .scenario import ScenarioSpec, SpecError, emit_report, parse_scenario_spec

log = logging.getLogger("peerbargain")

_COMMANDS = {
    "run": scenario_mod.run,
    "sweep": scenario_mod.sweep,
    "price-table": scenario_mod.price_table,
    "timing": scenario_mod.timing_experiment,
    "compare": scenario_mod.pair_comparison,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peerbargain",
        description="Premium-peering negotiation calculator",
    )
    parser.add_argument("--log-level", default="WARNING", help="python logging level name")
    sub = parser.add_subparsers(dest="command")

    for name in _COMMANDS:
        cmd = sub.add_parser(name, help=f"{name} a scenario spec")
        cmd.add_argument("--spec", required=True, help="path to a scenario spec JSON file")
        cmd.add_argument("--dataset", help='dataset id ("us2013") or file; overrides the spec')
        cmd.add_argument("--format", default="json", choices=["json", "csv", "markdown"])
        cmd.add_argument("--out", help="write the result here instead of stdout")

    check = sub.add_parser("validate-dataset", help="validate a dataset file")
    check.add_argument("--dataset", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--bind", default="127.0.0.1")
    return parser


def _load_spec(path: str) -> ScenarioSpec:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            obj = json.load(handle)
    except OSError as exc:
        raise SpecError([f"spec: cannot read {path!r}: {exc}"]) from exc
    except json.JSONDecodeError as exc:
        raise SpecError([f"spec: invalid JSON at line {exc.lineno}, column {exc.colno}"]) from exc
    return parse_scenario_spec(obj)


def _emit(text: str, out_path: Optional[str]):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    logging.basicConfig(level=args.log_level.upper(), stream=sys.stderr)

    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1

    if args.command == "validate-dataset":
        try:
            dataset = load_dataset(args.dataset)
        except DatasetError as exc:
            print(f"validation: {exc}", file=sys.stderr)
            return 2
        violations = validate_dataset(dataset)
        if violations:
            for violation in violations:
                print(f"validation: {violation}", file=sys.stderr)
            return 2
        sys.stdout.write(serialize_dataset(dataset))
        return 0

    if args.command == "serve":
        from .api import create_app
        import uvicorn

        uvicorn.run(create_app(), host=args.bind, port=args.port, log_level="warning")
        return 0

    operation = _COMMANDS[args.command]
    try:
        spec = _load_spec(args.spec)
        dataset = load_dataset(args.dataset) if args.dataset else None
        result = operation(spec, dataset)
        _emit(emit_report(result, args.format), args.out)
        return 0
    except (SpecError, DatasetError) as exc:
        reasons = getattr(exc, "violations", None) or [str(exc)]
        for reason in reasons:
            print(f"validation: {reason}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entrypoint():
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
