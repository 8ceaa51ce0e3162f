"""Command line entry point.

::

    reactenv list
    reactenv run --scenario thermostat --seed 42 --duration 10 [--set key=value]... [--trace out.jsonl]
    reactenv validate --trace out.jsonl
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import IO, Sequence

from .errors import ConfigError, ReactiveError
from .scenarios import SCENARIOS, Scenario
from .trace import render_event, validate_trace


@dataclass
class ScenarioConfig:
    scenario: str
    seed: int
    duration: float
    overrides: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r} (try: {', '.join(SCENARIOS)})")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not self.duration > 0:
            raise ConfigError(f"duration must be > 0, got {self.duration!r}")


def parse_overrides(items: Sequence[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for item in items:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"malformed override {item!r}, expected key=value")
        out[key] = value
    return out


def build_scenario(config: ScenarioConfig) -> Scenario:
    builder, _ = SCENARIOS[config.scenario]
    return builder(config.seed, config.duration, config.overrides)


def run_scenario(config: ScenarioConfig, trace_sink: IO[str], err: IO[str] | None = None) -> int:
    """Build and run a scenario, streaming trace lines to ``trace_sink``.

    Returns 0 on success, 1 on a hook failure, 2 on a configuration error.
    """
    err = sys.stderr if err is None else err
    try:
        scenario = build_scenario(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=err)
        return 2

    def sink(event) -> None:
        trace_sink.write(render_event(event))
        trace_sink.write("\n")

    scenario.engine.sink = sink
    try:
        scenario.engine.run_until(config.duration)
    except (ReactiveError, TypeError, ValueError) as exc:
        print(f"run aborted: {exc}", file=err)
        return 1
    finally:
        trace_sink.flush()
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reactenv", description="Run reactive environment scenarios.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list bundled scenarios")

    run = sub.add_parser("run", help="run a scenario and write its trace")
    run.add_argument("--scenario", required=True)
    run.add_argument("--seed", required=True, type=int)
    run.add_argument("--duration", required=True, type=float, help="virtual seconds")
    run.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    run.add_argument("--trace", default="-", help="output path, '-' for stdout (default)")

    val = sub.add_parser("validate", help="check a trace file's format and ordering")
    val.add_argument("--trace", required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)

    if args.command == "list":
        for name, (_, summary) in SCENARIOS.items():
            print(f"{name:<12} {summary}")
        return 0

    if args.command == "run":
        try:
            config = ScenarioConfig(args.scenario, args.seed, args.duration, parse_overrides(args.overrides))
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        if args.trace == "-":
            return run_scenario(config, sys.stdout)
        with open(args.trace, "w", encoding="utf-8", newline="\n") as fh:
            return run_scenario(config, fh)

    # validate
    try:
        with open(args.trace, encoding="utf-8", newline="") as fh:
            problems = validate_trace(fh)
    except OSError as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return 2
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return 1
    print("ok")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
