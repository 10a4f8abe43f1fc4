"""SMS command protocol: canonical command table, byte-exact matching, and
sender authentication.

The twelve command texts are data, not code: a fixed table built once at
import and immutable afterwards.  Matching is full-body byte equality --
case, spacing and length all significant -- so a garbled or mistyped
message can never actuate anything; it is silently ignored upstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

MAX_SMS_BODY_BYTES = 160

# Separator characters tolerated in raw phone-number input.
_NUMBER_SEPARATORS = set(" \t-.()/")
_PRINTABLE_ASCII = set(chr(c) for c in range(0x20, 0x7F))


class Command(Enum):
    """Remote vehicle actions, one per canonical message text."""

    POSITION_LIGHTS_ON = "PositionLightsOn"
    POSITION_LIGHTS_OFF = "PositionLightsOff"
    HEAD_LIGHTS_ON = "HeadLightsOn"
    HEAD_LIGHTS_OFF = "HeadLightsOff"
    BRAKE_LIGHTS_ON = "BrakeLightsOn"
    BRAKE_LIGHTS_OFF = "BrakeLightsOff"
    WARNING_ON = "WarningOn"
    WARNING_OFF = "WarningOff"
    LOCATION_ON = "LocationOn"
    LOCATION_OFF = "LocationOff"
    DOORS_LOCK = "DoorsLock"
    DOORS_UNLOCK = "DoorsUnlock"

    @property
    def tag(self) -> str:
        """Stable wire name used in transcripts and the CLI dump."""
        return self.value


_CANONICAL_TEXTS: tuple[tuple[str, Command], ...] = (
    ("0lights: ON", Command.POSITION_LIGHTS_ON),
    ("1lights: OFF", Command.POSITION_LIGHTS_OFF),
    ("2head: ON", Command.HEAD_LIGHTS_ON),
    ("3head: OFF", Command.HEAD_LIGHTS_OFF),
    ("4brake: ON", Command.BRAKE_LIGHTS_ON),
    ("5brake: OFF", Command.BRAKE_LIGHTS_OFF),
    ("6warning: ON", Command.WARNING_ON),
    ("7warning: OFF", Command.WARNING_OFF),
    ("8location: ON", Command.LOCATION_ON),
    ("9location: OFF", Command.LOCATION_OFF),
    ("adoors: ON", Command.DOORS_LOCK),
    ("bdoors: OFF", Command.DOORS_UNLOCK),
)


@dataclass(frozen=True)
class CommandEntry:
    """One row of the command table: message text, its byte length, action."""

    text: str
    length: int
    command: Command


_TABLE: tuple[CommandEntry, ...] = tuple(
    CommandEntry(text=text, length=len(text), command=cmd)
    for text, cmd in _CANONICAL_TEXTS
)
_BY_TEXT: dict[str, Command] = {e.text: e.command for e in _TABLE}
_BY_COMMAND: dict[Command, str] = {e.command: e.text for e in _TABLE}


def canonical_command_table() -> tuple[CommandEntry, ...]:
    """The fixed 12-entry command table, in index order ('0'..'9','a','b')."""
    return _TABLE


def canonical_text(command: Command) -> str:
    """The one message text that triggers `command`."""
    return _BY_COMMAND[command]


def parse_command(body: str | bytes) -> Command | None:
    """Decode an SMS body into a Command, or None when nothing matches.

    Matching is byte-for-byte against the canonical table: case-sensitive,
    whitespace-sensitive, full length.  None is a value, not an error;
    callers must treat it as "ignore silently".
    """
    if isinstance(body, bytes):
        try:
            body = body.decode("ascii")
        except UnicodeDecodeError:
            return None
    return _BY_TEXT.get(body)


def normalize_number(raw: str) -> str:
    """Normalize a phone number to '+<digits>' form.

    Tolerates spaces, dashes, dots, slashes and parentheses, and the '00'
    international prefix.  Normalization is idempotent; two numbers are
    equal iff their normalized forms are byte-equal.

    Raises ValueError unless 7..15 digits remain after cleanup.
    """
    stripped = "".join(ch for ch in raw if ch not in _NUMBER_SEPARATORS)
    if stripped.startswith("+"):
        digits = stripped[1:]
    elif stripped.startswith("00"):
        digits = stripped[2:]
    else:
        digits = stripped
    if not digits.isascii() or not digits.isdigit():
        raise ValueError(f"invalid phone number: {raw!r}")
    if not 7 <= len(digits) <= 15:
        raise ValueError(f"phone number needs 7-15 digits, got {len(digits)}: {raw!r}")
    return "+" + digits


@dataclass(frozen=True)
class SmsMessage:
    """A text-mode SMS: printable ASCII body of at most 160 bytes."""

    sender: str
    body: str
    submitted_at: int
    delivered_at: int | None = None

    def __post_init__(self) -> None:
        if len(self.body) > MAX_SMS_BODY_BYTES:
            raise ValueError(f"SMS body exceeds {MAX_SMS_BODY_BYTES} bytes")
        if not all(ch in _PRINTABLE_ASCII for ch in self.body):
            raise ValueError("SMS body must be printable ASCII")
        if self.delivered_at is not None and self.delivered_at < self.submitted_at:
            raise ValueError("delivered_at precedes submitted_at")


@dataclass(frozen=True)
class AuthRegistry:
    """Authorized senders: the owner plus any extra numbers.

    The owner is always part of the effective authorized set.  Numbers are
    normalized on construction.
    """

    owner: str
    additional_authorized: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "owner", normalize_number(self.owner))
        object.__setattr__(
            self,
            "additional_authorized",
            frozenset(normalize_number(n) for n in self.additional_authorized),
        )

    @property
    def authorized(self) -> frozenset[str]:
        return self.additional_authorized | {self.owner}


def authenticate(sender: str, registry: AuthRegistry) -> bool:
    """True iff `sender` may command the vehicle.

    A False result triggers the silent-drop policy: the message is deleted
    and no reply of any kind is sent.
    """
    return sender in registry.authorized


def set_owner(registry: AuthRegistry, new_owner: str) -> AuthRegistry:
    """Replace the owner number, leaving the additional set untouched.

    The previous owner drops out of the effective set unless it is listed
    in additional_authorized.  Raises ValueError for a malformed number,
    leaving the registry unchanged.
    """
    return replace(registry, owner=normalize_number(new_owner))
