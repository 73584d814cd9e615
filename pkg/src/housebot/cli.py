"""Command-line entry point: headless scenario runs and the live service."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import DEFAULT_PORT, DEFAULT_START, default_config
from .planner import MalformedMap, load_map
from .sim import World, resume_scenario, run_scenario
from .state import MalformedScenario, MalformedState, load_scenario, load_state_text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="housebot",
        description="Housekeeper-robot simulator: run a scripted scenario or serve the live API.",
    )
    parser.add_argument("--map", metavar="PATH", help="house map document (default: built-in map)")
    parser.add_argument("--scenario", metavar="PATH", help="scenario script to run headlessly")
    parser.add_argument("--state", metavar="PATH", help="resume from a saved state document")
    parser.add_argument("--out", metavar="PATH", help="transcript output file (default: stdout)")
    parser.add_argument("--seed", type=int, help="override the scenario's channel seed")
    parser.add_argument("--speed", type=float, default=0.0, help="simulated seconds per wall second in serve mode")
    parser.add_argument("--serve", action="store_true", help="serve the HTTP API instead of running a scenario")
    parser.add_argument("--port", type=int, default=DEFAULT_PORT, help=f"serve port (default {DEFAULT_PORT})")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = default_config()
        if args.map:
            config.grid = load_map(Path(args.map).read_text())
        world = None
        if args.state:
            world = load_state_text(Path(args.state).read_text(), config)
        if args.serve:
            from .service import BindFailure, serve

            if world is None:
                world = World(config, DEFAULT_START)
                world.bootstrap()
            try:
                serve(world, port=args.port, speed=args.speed)
            except BindFailure as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 1
            return 0
        if not args.scenario:
            parser.print_usage(sys.stderr)
            print("error: either --scenario or --serve is required", file=sys.stderr)
            return 2
        scenario = load_scenario(Path(args.scenario).read_text())
        if args.seed is not None:
            scenario = replace(scenario, seed=args.seed)
        if world is None:
            transcript = run_scenario(scenario, config)
        else:
            transcript = resume_scenario(world, scenario)
        text = transcript.to_jsonl()
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return 0
    except (OSError, MalformedMap, MalformedScenario, MalformedState, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
