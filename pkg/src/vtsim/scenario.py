"""Scenario files: the scripted stimuli a simulation run replays.

Line-oriented text, diff-friendly and writable by hand.  Two line shapes:

    set <key> <value>                 configuration, before any event
    <at_ms> <kind> <args...>          timestamped event

Event kinds:

    <t> sms <sender> "<body>"         inbound SMS submitted to the network
    <t> waypoint <lat> <lon> <sats> <hdop_hundredths>
    <t> power <main|backup> <on|off>
    <t> restart

Events must be sorted by time (ties keep file order).  Lines whose first
non-blank character is '#' are comments; blank lines are skipped.  The SMS
body is everything between the first and last double quote on the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Union

from .protocol import SmsMessage, normalize_number


class ScenarioError(ValueError):
    """Parse or validation failure, carrying file position."""

    def __init__(self, source: str, line: int, column: int, message: str) -> None:
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.source = source
        self.line = line
        self.column = column


@dataclass(frozen=True)
class InboundSms:
    at_ms: int
    sender: str
    body: str


@dataclass(frozen=True)
class Waypoint:
    at_ms: int
    lat: float
    lon: float
    sats: int
    hdop_hundredths: int


@dataclass(frozen=True)
class PowerEvent:
    at_ms: int
    source: str  # "main" | "backup"
    on: bool


@dataclass(frozen=True)
class RestartEvent:
    at_ms: int


ScenarioEvent = Union[InboundSms, Waypoint, PowerEvent, RestartEvent]


@dataclass
class ScenarioConfig:
    seed: int = 0
    owner: str = "+40722000001"
    sim_number: str = "+40740000000"
    authorized: tuple[str, ...] = ()
    attach_delay_ms: int | None = 60000  # None: modem never registers
    attach_deadline_ms: int = 120000
    ack_mode: bool = False
    tick_ms: int = 100
    latency_min_ms: int = 4000
    latency_max_ms: int = 6000
    location_period_ms: int | None = None
    full_precision: bool = False
    store_and_forward: bool = False
    main_power: bool = True
    backup_power: bool = True
    drain_ms: int = 15000


@dataclass
class Scenario:
    config: ScenarioConfig = field(default_factory=ScenarioConfig)
    events: tuple[ScenarioEvent, ...] = ()

    @property
    def last_event_ms(self) -> int:
        return max((e.at_ms for e in self.events), default=0)


_TOKEN_RE = re.compile(r"\S+")

_BOOL_WORDS = {"on": True, "true": True, "1": True, "off": False, "false": False, "0": False}


def _parse_bool(word: str) -> bool:
    try:
        return _BOOL_WORDS[word.lower()]
    except KeyError:
        raise ValueError(f"expected on/off, got {word!r}") from None


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(encoding="ascii"), source=str(path))


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    config = ScenarioConfig()
    authorized: list[str] = []
    events: list[ScenarioEvent] = []
    last_at = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        stripped = line.lstrip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = [(m.group(0), m.start() + 1) for m in _TOKEN_RE.finditer(line)]

        def fail(message: str, column: int = 1):
            raise ScenarioError(source, lineno, column, message)

        word, col = tokens[0]
        if word == "set":
            if events:
                fail("config lines must precede events", col)
            if len(tokens) < 3:
                fail("set needs a key and a value", col)
            key, value = tokens[1][0], tokens[2][0]
            try:
                config = _apply_setting(config, authorized, key, value)
            except ValueError as exc:
                fail(str(exc), tokens[2][1])
            continue

        try:
            at_ms = int(word)
        except ValueError:
            fail(f"expected timestamp or 'set', got {word!r}", col)
        if at_ms < 0:
            fail("timestamps must be non-negative", col)
        if at_ms < last_at:
            fail(f"events out of order: {at_ms} after {last_at}", col)
        last_at = at_ms

        if len(tokens) < 2:
            fail("missing event kind", col)
        kind, kind_col = tokens[1]
        try:
            events.append(_parse_event(at_ms, kind, tokens, line))
        except ValueError as exc:
            fail(str(exc), kind_col)

    config.authorized = tuple(authorized)
    return Scenario(config=config, events=tuple(events))


def _parse_event(at_ms: int, kind: str, tokens, line: str) -> ScenarioEvent:
    if kind == "sms":
        if len(tokens) < 3:
            raise ValueError("sms needs: <sender> \"<body>\"")
        sender = normalize_number(tokens[2][0])
        first = line.find('"')
        last = line.rfind('"')
        if first < 0 or last <= first:
            raise ValueError("sms body must be double-quoted")
        body = line[first + 1 : last]
        SmsMessage(sender=sender, body=body, submitted_at=at_ms)  # validate body
        return InboundSms(at_ms=at_ms, sender=sender, body=body)
    if kind == "waypoint":
        if len(tokens) != 6:
            raise ValueError("waypoint needs: <lat> <lon> <sats> <hdop_hundredths>")
        lat = float(tokens[2][0])
        lon = float(tokens[3][0])
        sats = int(tokens[4][0])
        hdop = int(tokens[5][0])
        if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
            raise ValueError("waypoint coordinates out of range")
        if sats < 0 or hdop < 0:
            raise ValueError("waypoint counts must be non-negative")
        return Waypoint(at_ms=at_ms, lat=lat, lon=lon, sats=sats, hdop_hundredths=hdop)
    if kind == "power":
        if len(tokens) != 4 or tokens[2][0] not in ("main", "backup"):
            raise ValueError("power needs: <main|backup> <on|off>")
        return PowerEvent(at_ms=at_ms, source=tokens[2][0], on=_parse_bool(tokens[3][0]))
    if kind == "restart":
        if len(tokens) != 2:
            raise ValueError("restart takes no arguments")
        return RestartEvent(at_ms=at_ms)
    raise ValueError(f"unknown event kind {kind!r}")


def _apply_setting(
    config: ScenarioConfig, authorized: list[str], key: str, value: str
) -> ScenarioConfig:
    if key == "seed":
        return replace(config, seed=int(value))
    if key == "owner":
        return replace(config, owner=normalize_number(value))
    if key == "sim_number":
        return replace(config, sim_number=normalize_number(value))
    if key == "authorized":
        authorized.append(normalize_number(value))
        return config
    if key == "attach_delay":
        if value == "never":
            return replace(config, attach_delay_ms=None)
        return replace(config, attach_delay_ms=_non_negative(value))
    if key == "attach_deadline":
        return replace(config, attach_deadline_ms=_non_negative(value))
    if key == "ack_mode":
        return replace(config, ack_mode=_parse_bool(value))
    if key == "tick_ms":
        ms = int(value)
        if ms <= 0:
            raise ValueError("tick_ms must be positive")
        return replace(config, tick_ms=ms)
    if key == "latency_min":
        return replace(config, latency_min_ms=_non_negative(value))
    if key == "latency_max":
        return replace(config, latency_max_ms=_non_negative(value))
    if key == "location_period_ms":
        ms = int(value)
        return replace(config, location_period_ms=ms if ms > 0 else None)
    if key == "full_precision":
        return replace(config, full_precision=_parse_bool(value))
    if key == "store_and_forward":
        return replace(config, store_and_forward=_parse_bool(value))
    if key == "main_power":
        return replace(config, main_power=_parse_bool(value))
    if key == "backup_power":
        return replace(config, backup_power=_parse_bool(value))
    if key == "drain_ms":
        return replace(config, drain_ms=_non_negative(value))
    raise ValueError(f"unknown setting {key!r}")


def _non_negative(value: str) -> int:
    ms = int(value)
    if ms < 0:
        raise ValueError("value must be non-negative")
    return ms
