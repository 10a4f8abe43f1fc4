"""Ordered record of everything observable that happened in a run.

One JSON object per line, stable key order, timestamps non-decreasing.
Identical (scenario, seed) pairs must produce byte-identical output; the
append guard turns any ordering bug into a loud failure instead of a
silently corrupted transcript.
"""

from __future__ import annotations

import json
from typing import Callable


class TranscriptError(RuntimeError):
    """Internal ordering invariant breached; aborts the run with a diagnostic."""


class Transcript:
    def __init__(self) -> None:
        self.records: list[dict] = []
        self.listeners: list[Callable[[dict], None]] = []

    def append(self, t_ms: int, rtype: str, **payload) -> dict:
        if self.records and t_ms < self.records[-1]["t"]:
            raise TranscriptError(
                f"record {rtype!r} at t={t_ms} after t={self.records[-1]['t']}"
            )
        record = {"t": t_ms, "type": rtype}
        record.update(payload)
        self.records.append(record)
        for listener in self.listeners:
            listener(record)
        return record

    def of_type(self, *types: str) -> list[dict]:
        return [r for r in self.records if r["type"] in types]

    def to_jsonl(self) -> str:
        lines = [json.dumps(r, separators=(",", ":")) for r in self.records]
        return "\n".join(lines) + ("\n" if lines else "")
