"""Command-line entry point.

    vtsim run <scenario> [--seed N] [--out FILE]
    vtsim run <scenario> --interactive [--port P] [--speedup X]
    vtsim print-commands         (also: vtsim --print-commands)
    vtsim decode-nmea <file>
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .gateway import run_interactive
from .harness import run_scenario
from .location import compose_location_text
from .nmea import NmeaDecoder
from .protocol import canonical_command_table
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario


def _print_commands() -> None:
    for entry in canonical_command_table():
        print(f"{entry.text}\t{entry.command.tag}")


def _resolve_scenario(name: str | None) -> Scenario:
    if name is None:
        return parse_scenario("", source="<empty>")
    path = Path(name)
    if path.exists():
        return load_scenario(path)
    builtin = resources.files("vtsim").joinpath(f"scenarios/{name}.scn")
    if builtin.is_file():
        return parse_scenario(builtin.read_text(encoding="ascii"), source=name)
    raise FileNotFoundError(f"no scenario file or builtin scenario named {name!r}")


def _cmd_run(args) -> int:
    try:
        scenario = _resolve_scenario(args.scenario)
    except (ScenarioError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        scenario.config.seed = args.seed
    if args.interactive:
        def announce(gateway):
            print(f"console gateway listening on {gateway.host}:{gateway.port}")
            print(f"virtual clock at {args.speedup:g}x real time; Ctrl-C to stop")
        run_interactive(
            scenario, port=args.port, speedup=args.speedup, ready=announce
        )
        return 0
    transcript = run_scenario(scenario)
    output = transcript.to_jsonl()
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return 0


def _cmd_decode_nmea(args) -> int:
    try:
        data = Path(args.file).read_bytes()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    decoder = NmeaDecoder()
    for fix in decoder.feed(data):
        print(compose_location_text(fix))
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if "--print-commands" in argv:
        _print_commands()
        return 0

    parser = argparse.ArgumentParser(
        prog="vtsim",
        description="Deterministic simulator of an SMS-controlled vehicle unit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="replay a scenario file")
    p_run.add_argument("scenario", nargs="?", help="scenario file path or builtin name")
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.add_argument("--out", default=None, help="write the transcript JSONL here")
    p_run.add_argument(
        "--interactive", action="store_true", help="pace in real time, open the gateway"
    )
    p_run.add_argument("--port", type=int, default=3737, help="gateway port (0 = any)")
    p_run.add_argument(
        "--speedup", type=float, default=1.0, help="virtual/real time ratio"
    )
    p_run.set_defaults(fn=_cmd_run)

    p_cmds = sub.add_parser("print-commands", help="dump the canonical command table")
    p_cmds.set_defaults(fn=lambda _args: (_print_commands(), 0)[1])

    p_nmea = sub.add_parser("decode-nmea", help="decode a raw NMEA byte stream")
    p_nmea.add_argument("file")
    p_nmea.set_defaults(fn=_cmd_decode_nmea)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
