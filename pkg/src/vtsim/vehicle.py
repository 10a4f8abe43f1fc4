"""Vehicle feature state and the virtual LED indicator board.

State is an immutable record of seven booleans.  Applying a command returns
the updated state plus its observable effects: the multiplexer strobe that
would drive the light board (lighting commands only) and the signed change
in lit LEDs per color.

The board model shares LED banks the way the real panel does: one white
pair for position/head lights, one red pair for position/brake lights,
four yellows for the warning flashers, one red attention LED for
doors-open / GSM-waiting, and a green status LED each for locked doors and
GSM readiness.  Counts therefore never exceed white 2, red 3, yellow 4,
green 2 for any state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .protocol import Command


@dataclass(frozen=True)
class VehicleState:
    position_lights: bool = False
    head_lights: bool = False
    brake_lights: bool = False
    warning_lights: bool = False
    doors_locked: bool = False
    gsm_ready: bool = False
    location_mode: bool = False


def initial_state() -> VehicleState:
    """Power-on state: every feature off, GSM not yet registered."""
    return VehicleState()


@dataclass(frozen=True)
class MultiplexCode:
    """Three select bits addressing one of eight board channels."""

    s0: int
    s1: int
    s2: int

    def __post_init__(self) -> None:
        for bit in (self.s0, self.s1, self.s2):
            if bit not in (0, 1):
                raise ValueError(f"select bits must be 0 or 1, got {bit}")

    @property
    def channel(self) -> int:
        return self.s2 * 4 + self.s1 * 2 + self.s0


class NotMultiplexed(ValueError):
    """Raised for commands that do not route through the multiplexer."""


# Select triples per lighting command, first written digit = s0.  Every OFF
# command shares (1,0,1): the board's all-lights-off acknowledge channel.
_MUX_CODES: dict[Command, MultiplexCode] = {
    Command.POSITION_LIGHTS_ON: MultiplexCode(1, 0, 0),
    Command.POSITION_LIGHTS_OFF: MultiplexCode(1, 0, 1),
    Command.HEAD_LIGHTS_ON: MultiplexCode(0, 0, 1),
    Command.HEAD_LIGHTS_OFF: MultiplexCode(1, 0, 1),
    Command.BRAKE_LIGHTS_ON: MultiplexCode(0, 1, 0),
    Command.BRAKE_LIGHTS_OFF: MultiplexCode(1, 0, 1),
    Command.WARNING_ON: MultiplexCode(1, 1, 1),
    Command.WARNING_OFF: MultiplexCode(1, 0, 1),
}


def multiplex_code_for(command: Command) -> MultiplexCode:
    """The select triple strobed for a lighting command.

    Doors and location commands bypass the multiplexer; asking for their
    code raises NotMultiplexed.
    """
    try:
        return _MUX_CODES[command]
    except KeyError:
        raise NotMultiplexed(f"{command.tag} does not drive the multiplexer") from None


_PANEL_MAXIMA = {"white": 2, "red": 3, "yellow": 4, "green": 2}


@dataclass(frozen=True)
class LedPanel:
    """Lit-LED counts per color; bounded by the board's physical LEDs."""

    white: int = 0
    red: int = 0
    yellow: int = 0
    green: int = 0

    def __post_init__(self) -> None:
        for color, maximum in _PANEL_MAXIMA.items():
            count = getattr(self, color)
            if not 0 <= count <= maximum:
                raise ValueError(f"{color} count {count} outside 0..{maximum}")


@dataclass(frozen=True)
class PanelDelta:
    """Signed change in lit LEDs; negative means an LED went dark."""

    white: int = 0
    red: int = 0
    yellow: int = 0
    green: int = 0

    def __add__(self, other: "PanelDelta") -> "PanelDelta":
        return PanelDelta(
            self.white + other.white,
            self.red + other.red,
            self.yellow + other.yellow,
            self.green + other.green,
        )


def render_panel(state: VehicleState) -> LedPanel:
    """The full board as a pure function of state."""
    white = 2 if (state.position_lights or state.head_lights) else 0
    red = 2 if (state.position_lights or state.brake_lights) else 0
    if not state.doors_locked or not state.gsm_ready:
        red += 1  # shared attention LED: doors open and/or GSM waiting
    yellow = 4 if state.warning_lights else 0
    green = (1 if state.doors_locked else 0) + (1 if state.gsm_ready else 0)
    return LedPanel(white=white, red=red, yellow=yellow, green=green)


def panel_delta(before: LedPanel, after: LedPanel) -> PanelDelta:
    return PanelDelta(
        white=after.white - before.white,
        red=after.red - before.red,
        yellow=after.yellow - before.yellow,
        green=after.green - before.green,
    )


# Which boolean each command targets, and the value it forces.
_TARGETS: dict[Command, tuple[str, bool]] = {
    Command.POSITION_LIGHTS_ON: ("position_lights", True),
    Command.POSITION_LIGHTS_OFF: ("position_lights", False),
    Command.HEAD_LIGHTS_ON: ("head_lights", True),
    Command.HEAD_LIGHTS_OFF: ("head_lights", False),
    Command.BRAKE_LIGHTS_ON: ("brake_lights", True),
    Command.BRAKE_LIGHTS_OFF: ("brake_lights", False),
    Command.WARNING_ON: ("warning_lights", True),
    Command.WARNING_OFF: ("warning_lights", False),
    Command.LOCATION_ON: ("location_mode", True),
    Command.LOCATION_OFF: ("location_mode", False),
    Command.DOORS_LOCK: ("doors_locked", True),
    Command.DOORS_UNLOCK: ("doors_locked", False),
}

Effect = MultiplexCode | PanelDelta


def target_field(command: Command) -> str:
    """Name of the VehicleState boolean a command writes."""
    return _TARGETS[command][0]


def apply_command(
    state: VehicleState, command: Command
) -> tuple[VehicleState, list[Effect]]:
    """Set the command's target boolean; report strobe and LED changes.

    Only the targeted boolean ever changes.  Repeating a command is
    idempotent on state.
    """
    fieldname, value = _TARGETS[command]
    new_state = replace(state, **{fieldname: value})
    effects: list[Effect] = []
    code = _MUX_CODES.get(command)
    if code is not None:
        effects.append(code)
    effects.append(panel_delta(render_panel(state), render_panel(new_state)))
    return new_state, effects


def gsm_status_leds(ready: bool) -> PanelDelta:
    """GSM indicator change: red while waiting, green once registered."""
    if ready:
        return PanelDelta(green=1, red=-1)
    return PanelDelta(red=1)
