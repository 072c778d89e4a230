"""Command-line client for the service layer.

Every subcommand builds the same request model the HTTP endpoint
accepts, runs the shared handler in process and prints the response as
one JSON document on stdout; diagnostics go to stderr only.

Exit codes: 0 success (and member / all-pass verdicts), 1 negative
verdict (non-member, out-of-region plan, failed scan), 2 usage or parse
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from pydantic import BaseModel

from . import __version__
from .errors import (
    InvalidGainsError,
    NotInRegionError,
    RateParseError,
    ScanLimitError,
)
from .service import (
    SCHEMA_ERROR,
    CheckRequest,
    PlanRequest,
    RegionRequest,
    ScanRequest,
    check_handler,
    plan_handler,
    region_handler,
    scan_handler,
)

RATE_ORDER = "R12 R13 R21 R23 R31 R32"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dychan",
        description="Capacity regions and verified relay level plans for the "
        "linear shift deterministic Y-channel.",
    )
    parser.add_argument("--version", action="version", version=f"dychan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    region = sub.add_parser("region", help="emit the capacity region polytope")
    region.add_argument("n1", type=int)
    region.add_argument("n2", type=int)
    region.add_argument("n3", type=int)
    region.add_argument("--vertices", action="store_true", help="include all corner points")
    region.add_argument("--redundancy", action="store_true",
                        help="include the cut-set / single-rate redundancy report")
    region.add_argument("--output", metavar="FILE", help="write the JSON payload to FILE")

    check = sub.add_parser("check", help="test membership of a rate tuple")
    check.add_argument("n1", type=int)
    check.add_argument("n2", type=int)
    check.add_argument("n3", type=int)
    check.add_argument("rates", nargs=6, metavar="R",
                       help=f"six rates in the order {RATE_ORDER}; integers or 'p/q'")
    check.add_argument("--output", metavar="FILE")

    plan = sub.add_parser("plan", help="build (and optionally simulate) a level plan")
    plan.add_argument("n1", type=int)
    plan.add_argument("n2", type=int)
    plan.add_argument("n3", type=int)
    plan.add_argument("rates", nargs=6, metavar="R",
                      help=f"six rates in the order {RATE_ORDER}; fractional tuples "
                      "are scaled onto an extended channel automatically")
    plan.add_argument("--simulate", action="store_true", help="verify the plan end to end")
    mode = plan.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true",
                      help="force exhaustive simulation over every message set")
    mode.add_argument("--random", action="store_true",
                      help="force seeded random simulation")
    plan.add_argument("--seed", type=int, default=0, help="seed for random simulation")
    plan.add_argument("--trials", type=int, default=256, help="random simulation trials")
    plan.add_argument("--output", metavar="FILE")

    scan = sub.add_parser("scan", help="plan and simulate every integer point "
                          "of every region up to a gain limit")
    scan.add_argument("--max-n1", type=int, default=4)
    scan.add_argument("--seed", type=int, default=0)
    scan.add_argument("--probes", type=int, default=25,
                      help="out-of-region probes per configuration")
    scan.add_argument("--force", action="store_true", help="allow max-n1 beyond the safety limit")
    scan.add_argument("--output", metavar="FILE")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def _emit(payload: BaseModel | dict, output: str | None) -> None:
    if isinstance(payload, BaseModel):
        data = payload.model_dump(by_alias=True, exclude_none=True)
    else:
        data = payload
    text = json.dumps(data, indent=2)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    try:
        if args.command == "region":
            request = RegionRequest(n1=args.n1, n2=args.n2, n3=args.n3,
                                    vertices=args.vertices, redundancy=args.redundancy)
            _emit(region_handler(request), args.output)
            return 0

        if args.command == "check":
            request = CheckRequest(n1=args.n1, n2=args.n2, n3=args.n3, rates=args.rates)
            response = check_handler(request)
            _emit(response, args.output)
            return 0 if response.member else 1

        if args.command == "plan":
            exhaustive = True if args.exhaustive else (False if args.random else None)
            request = PlanRequest(
                n1=args.n1, n2=args.n2, n3=args.n3, rates=args.rates,
                simulate=args.simulate, exhaustive=exhaustive,
                seed=args.seed, trials=args.trials,
            )
            try:
                response = plan_handler(request)
            except NotInRegionError as exc:
                print(f"error: {exc}", file=sys.stderr)
                _emit({"schema": SCHEMA_ERROR, "error": "NOT_IN_REGION",
                       "violated": list(exc.violated)}, args.output)
                return 1
            _emit(response, args.output)
            if response.simulation is not None and not response.simulation.passed:
                return 1
            return 0

        if args.command == "scan":
            request = ScanRequest(max_n1=args.max_n1, seed=args.seed,
                                  force=args.force, probes_per_config=args.probes)
            response = scan_handler(request)
            _emit(response, args.output)
            return 0 if response.passed else 1

        if args.command == "serve":
            import uvicorn

            from .service import app

            uvicorn.run(app, host=args.host, port=args.port)
            return 0
    except (InvalidGainsError, RateParseError, ScanLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
