"""Synthesized GPS serial input.

Scenario waypoints become checksum-correct GGA sentences on a byte
timetable.  The firmware drains the timetable during its acquisition
windows; a power cycle clears whatever was buffered, the way a real serial
buffer would vanish.
"""

from __future__ import annotations

from .nmea import checksum


def degrees_to_dm(value: float, longitude: bool = False) -> tuple[str, str]:
    """Signed decimal degrees to (ddmm.mmmm field, hemisphere letter).

    Inverse of the decoder's conversion; minutes carry four decimals, so
    the round trip stays within 1e-6 degrees.
    """
    if longitude:
        hemisphere = "E" if value >= 0 else "W"
    else:
        hemisphere = "N" if value >= 0 else "S"
    magnitude = abs(value)
    degrees = int(magnitude)
    minutes = (magnitude - degrees) * 60.0
    width = 3 if longitude else 2
    return f"{degrees:0{width}d}{minutes:07.4f}", hemisphere


def _gga_time(at_ms: int) -> str:
    hours = (at_ms // 3_600_000) % 24
    mins = (at_ms // 60_000) % 60
    secs = (at_ms // 1000) % 60
    centis = (at_ms % 1000) // 10
    return f"{hours:02d}{mins:02d}{secs:02d}.{centis:02d}"


def gga_sentence(
    lat: float, lon: float, sats: int, hdop_hundredths: int, at_ms: int
) -> bytes:
    """One complete $GPGGA sentence with a correct checksum, CRLF-terminated."""
    lat_field, lat_hemi = degrees_to_dm(lat, longitude=False)
    lon_field, lon_hemi = degrees_to_dm(lon, longitude=True)
    hdop = f"{hdop_hundredths // 100}.{hdop_hundredths % 100:02d}"
    body = (
        f"GPGGA,{_gga_time(at_ms)},{lat_field},{lat_hemi},{lon_field},{lon_hemi},"
        f"1,{sats:02d},{hdop},0.0,M,0.0,M,,"
    )
    return f"${body}*{checksum(body)}\r\n".encode("ascii")


def waypoints_to_nmea(waypoints) -> list[tuple[int, bytes]]:
    """Each waypoint becomes one timed GGA emission.

    Accepts any iterable of objects with at_ms, lat, lon, sats,
    hdop_hundredths attributes (scenario Waypoint events).
    """
    return [
        (w.at_ms, gga_sentence(w.lat, w.lon, w.sats, w.hdop_hundredths, w.at_ms))
        for w in waypoints
    ]


class GpsFeed:
    """Time-ordered byte chunks awaiting consumption by the firmware."""

    def __init__(self, entries: list[tuple[int, bytes]] | None = None) -> None:
        self._entries = sorted(entries or [], key=lambda e: e[0])
        self._cursor = 0

    def take_until(self, deadline_ms: int) -> list[tuple[int, bytes]]:
        """Consume and return every chunk with timestamp < deadline_ms."""
        taken = []
        while self._cursor < len(self._entries):
            at_ms, data = self._entries[self._cursor]
            if at_ms >= deadline_ms:
                break
            taken.append((at_ms, data))
            self._cursor += 1
        return taken

    def discard_until(self, t_ms: int) -> None:
        """Drop chunks with timestamp <= t_ms (buffer lost on power cycle)."""
        while (
            self._cursor < len(self._entries)
            and self._entries[self._cursor][0] <= t_ms
        ):
            self._cursor += 1

    def pending(self) -> int:
        return len(self._entries) - self._cursor
