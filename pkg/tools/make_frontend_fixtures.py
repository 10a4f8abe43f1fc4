#!/usr/bin/env python3
"""Regenerate the recorded gateway streams the frontend tests replay.

Each fixture is what a console client would read from the gateway: the
hello object first, then the transcript records of a batch run.  Run from
the repository root:

    python3 tools/make_frontend_fixtures.py
"""

import json
from pathlib import Path

from vtsim.harness import run_scenario
from vtsim.protocol import canonical_command_table, canonical_text
from vtsim.scenario import parse_scenario

OWNER = "+40722000001"
SIM = "+40740000000"

FIXTURES = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures"

BASE = (
    f"set seed 11\nset owner {OWNER}\nset sim_number {SIM}\n"
    "set attach_delay 0\n"
)


def hello() -> dict:
    return {
        "type": "hello",
        "t": 0,
        "sim_number": SIM,
        "owner": OWNER,
        "speedup": 20.0,
        "commands": [
            {"text": e.text, "tag": e.command.tag} for e in canonical_command_table()
        ],
    }


def write(name: str, scenario_text: str) -> None:
    transcript = run_scenario(parse_scenario(scenario_text))
    lines = [json.dumps(hello(), separators=(",", ":"))]
    lines += [json.dumps(r, separators=(",", ":")) for r in transcript.records]
    path = FIXTURES / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(lines)} lines)")


def main() -> None:
    lines = [BASE, "set drain_ms 20000\n", "1000 waypoint 44.44212 26.04938 7 120\n"]
    t = 2000
    for entry in canonical_command_table():
        lines.append(f'{t} sms {OWNER} "{canonical_text(entry.command)}"\n')
        t += 8000
    write("all_commands.jsonl", "".join(lines))

    write(
        "garbage.jsonl",
        BASE + f'1000 sms {OWNER} "hello there"\n',
    )


if __name__ == "__main__":
    main()
