"""Streaming NMEA 0183 decoder for GGA and RMC position sentences.

Bytes go in one at a time.  A completed, checksum-valid sentence that
carries a usable position atomically updates the last-known fix; anything
else -- garbage, truncation, a failed checksum, an unsupported sentence
type -- simply fails to complete and never raises.  '$' restarts sentence
accumulation at any point.  Sentences without a checksum are rejected.

Queries never expose the internal invalid sentinel: with no fix decoded
yet, positions read as 0.0 and counts as 0.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_SENTENCE_LEN = 82

_IDLE, _BODY, _CHECKSUM = 0, 1, 2


def checksum(body: str | bytes) -> str:
    """XOR of all bytes strictly between '$' and '*', as two uppercase hex digits."""
    if isinstance(body, str):
        body = body.encode("ascii")
    value = 0
    for b in body:
        value ^= b
    return f"{value:02X}"


@dataclass(frozen=True)
class GpsFix:
    """A decoded position, already sentinel-mapped for public use.

    `hdop_hundredths` is the horizontal dilution of precision times 100
    (HDOP 0.9 reads as 90).  `valid` is False for the zero fix returned
    before anything has been decoded.
    """

    latitude: float = 0.0
    longitude: float = 0.0
    satellites: int = 0
    hdop_hundredths: int = 0
    age_ms: int = 0
    valid: bool = False


ZERO_FIX = GpsFix()


def dm_to_degrees(field: str, hemisphere: str) -> float:
    """Convert NMEA ddmm.mmmm (or dddmm.mmmm) plus hemisphere to signed degrees.

    Raises ValueError for anything that is not a well-formed coordinate
    field; callers treat that as sentence rejection.
    """
    if hemisphere not in ("N", "S", "E", "W"):
        raise ValueError(f"bad hemisphere {hemisphere!r}")
    intpart, dot, frac = field.partition(".")
    if len(intpart) < 3 or not intpart.isdigit():
        raise ValueError(f"bad coordinate field {field!r}")
    if dot and not frac.isdigit():
        raise ValueError(f"bad coordinate field {field!r}")
    minutes = float(intpart[-2:] + "." + (frac or "0"))
    degrees = int(intpart[:-2])
    value = degrees + minutes / 60.0
    return -value if hemisphere in ("S", "W") else value


def _hdop_to_hundredths(text: str) -> int:
    """Parse a decimal HDOP field ("0.9", "1.20") to integer hundredths."""
    intpart, _, frac = text.partition(".")
    whole = int(intpart or "0")
    cents = (frac + "00")[:2]
    return whole * 100 + int(cents)


class NmeaDecoder:
    """Byte-at-a-time sentence accumulator with position state.

    One decoder per GPS stream; single-writer.  `encode` returns True
    exactly on the byte that completes a checksum-valid GGA or RMC sentence
    carrying a position.
    """

    def __init__(self) -> None:
        self._phase = _IDLE
        self._body: list[str] = []
        self._xor = 0
        self._cs: list[str] = []
        self._valid = False
        self._lat = 0.0
        self._lon = 0.0
        self._sats = 0
        self._hdop = 0
        self._fix_time = 0

    # -- feeding ---------------------------------------------------------

    def encode(self, byte: int | str, now_ms: int = 0) -> bool:
        """Consume one byte; True when it completes a position sentence."""
        c = chr(byte) if isinstance(byte, int) else byte
        if c == "$":
            self._phase = _BODY
            self._body = []
            self._xor = 0
            self._cs = []
            return False
        if self._phase == _IDLE:
            return False
        if c in "\r\n" or not (" " <= c <= "~"):
            # Terminator before '*' means no checksum: reject the sentence.
            self._phase = _IDLE
            return False
        if self._phase == _BODY:
            if c == "*":
                self._phase = _CHECKSUM
                return False
            self._body.append(c)
            self._xor ^= ord(c)
            if len(self._body) > MAX_SENTENCE_LEN:
                self._phase = _IDLE
            return False
        # _CHECKSUM: exactly two hex digits expected
        self._cs.append(c)
        if len(self._cs) < 2:
            return False
        self._phase = _IDLE
        try:
            want = int("".join(self._cs), 16)
        except ValueError:
            return False
        if want != self._xor:
            return False
        return self._accept("".join(self._body), now_ms)

    def feed(self, data: bytes | str, now_ms: int = 0) -> list[GpsFix]:
        """Consume a chunk; return the fix snapshot at each completion."""
        fixes = []
        for b in data:
            if self.encode(b, now_ms):
                fixes.append(self.fix_snapshot(now_ms))
        return fixes

    # -- sentence handling -------------------------------------------------

    def _accept(self, body: str, now_ms: int) -> bool:
        fields = body.split(",")
        address = fields[0]
        if len(address) != 5:
            return False
        if address.endswith("GGA"):
            return self._take_gga(fields, now_ms)
        if address.endswith("RMC"):
            return self._take_rmc(fields, now_ms)
        return False

    def _take_gga(self, f: list[str], now_ms: int) -> bool:
        if len(f) < 9:
            return False
        try:
            if int(f[6] or "0") < 1:
                return False  # no fix quality: position not usable
            lat = dm_to_degrees(f[2], f[3])
            lon = dm_to_degrees(f[4], f[5])
            sats = int(f[7]) if f[7] else 0
            hdop = _hdop_to_hundredths(f[8]) if f[8] else 0
        except ValueError:
            return False
        self._lat, self._lon = lat, lon
        self._sats, self._hdop = sats, hdop
        self._fix_time = now_ms
        self._valid = True
        return True

    def _take_rmc(self, f: list[str], now_ms: int) -> bool:
        if len(f) < 7 or f[2] != "A":
            return False  # void fixes never update state
        try:
            lat = dm_to_degrees(f[3], f[4])
            lon = dm_to_degrees(f[5], f[6])
        except ValueError:
            return False
        self._lat, self._lon = lat, lon
        self._fix_time = now_ms
        self._valid = True
        return True

    # -- queries -----------------------------------------------------------

    @property
    def has_fix(self) -> bool:
        return self._valid

    def get_position(self, now_ms: int = 0) -> tuple[float, float, int]:
        """Last decoded (lat, lon, age_ms); zeros before the first fix."""
        if not self._valid:
            return 0.0, 0.0, 0
        return self._lat, self._lon, now_ms - self._fix_time

    def satellites(self) -> int:
        return self._sats if self._valid else 0

    def hdop_hundredths(self) -> int:
        return self._hdop if self._valid else 0

    def fix_snapshot(self, now_ms: int = 0) -> GpsFix:
        """Current fix as a value, sentinel-mapped."""
        if not self._valid:
            return ZERO_FIX
        return GpsFix(
            latitude=self._lat,
            longitude=self._lon,
            satellites=self._sats,
            hdop_hundredths=self._hdop,
            age_ms=now_ms - self._fix_time,
            valid=True,
        )
