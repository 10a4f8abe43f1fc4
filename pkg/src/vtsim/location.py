"""Outbound position reports: fix acquisition and the two report formats.

Coordinates render with six fractional digits.  The maps link keeps only
the first eight bytes of each coordinate -- faithful to the control unit's
fixed-size text buffers -- unless full precision is configured.
"""

from __future__ import annotations

import re

from .nmea import GpsFix, NmeaDecoder, ZERO_FIX

MAPS_LINK_BASE = "https://www.google.ro/maps/place/"

_LINK_RE = re.compile(
    r"^https://www\.google\.ro/maps/place/([^/+]+)\+([^/]+)/@([^,]+),([^,]+),17z/$"
)


def format_coord(value: float, full_precision: bool = False) -> str:
    """Render a coordinate with 6 fractional digits, then keep bytes 0..7.

    The truncation is what the vehicle's firmware transmits; it loses
    precision for negative or three-digit-degree longitudes.  Pass
    full_precision=True to skip it.
    """
    text = f"{value:.6f}"
    return text if full_precision else text[:8]


def compose_location_text(fix: GpsFix) -> str:
    """The serial-style report: LAT/LON at 6 fractional digits, no truncation."""
    return (
        f"LAT={fix.latitude:.6f} LON={fix.longitude:.6f}"
        f" SAT={fix.satellites} PREC={fix.hdop_hundredths}"
    )


def compose_maps_link(fix: GpsFix, full_precision: bool = False) -> str:
    """The Google Maps link sent by SMS, ending at the ',17z/' zoom segment."""
    lat = format_coord(fix.latitude, full_precision)
    lon = format_coord(fix.longitude, full_precision)
    return f"{MAPS_LINK_BASE}{lat}+{lon}/@{lat},{lon},17z/"


def parse_maps_link(link: str) -> tuple[float, float] | None:
    """Recover (lat, lon) from a composed maps link; None if it is not one."""
    m = _LINK_RE.match(link)
    if m is None:
        return None
    try:
        lat, lon = float(m.group(1)), float(m.group(2))
    except ValueError:
        return None
    return lat, lon


def acquire_fix(
    decoder: NmeaDecoder,
    stream,
    now_ms: int,
    window_ms: int = 1000,
) -> GpsFix:
    """Drain the GPS stream for one polling window and return the fix.

    Consumes every byte the stream has queued up to now_ms + window_ms
    (exclusive) and feeds it through the decoder.  Returns the last fix
    completed during this window; if none completes, the zero fix -- even
    when the decoder still remembers an older position.

    `stream` needs take_until(deadline) -> list of (at_ms, bytes).
    """
    deadline = now_ms + window_ms
    got: GpsFix | None = None
    for at_ms, data in stream.take_until(deadline):
        seen_at = max(at_ms, now_ms)
        for b in data:
            if decoder.encode(b, now_ms=seen_at):
                got = decoder.fix_snapshot(seen_at)
    return got if got is not None else ZERO_FIX
