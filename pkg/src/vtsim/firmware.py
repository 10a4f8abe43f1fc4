"""The control unit program: boot, network attach, and the command loop.

Boot starts from the all-off state and polls the modem until it registers
on the network (red GSM indicator until then, green after).  Missing the
attach deadline is a terminal error: the unit dispatches nothing until it
is restarted.

Each loop iteration reads at most one unread SMS and walks it through
authenticate -> parse -> dispatch.  Failures at any step are silent by
design: the message is deleted and no reply is ever sent, so a stranger
cannot even learn the system exists.  Location requests open a one-second
GPS acquisition window and answer with the maps link.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .clock import Scheduler, VirtualClock
from .gpsfeed import GpsFeed
from .location import acquire_fix, compose_maps_link
from .modem import CTRL_Z, GsmModem
from .nmea import NmeaDecoder
from .protocol import AuthRegistry, Command, authenticate, canonical_text, parse_command
from .transcript import Transcript
from .vehicle import (
    VehicleState,
    apply_command,
    initial_state,
    multiplex_code_for,
    render_panel,
    NotMultiplexed,
)

PHASE_BOOT = "boot"
PHASE_READY = "ready"
PHASE_ERROR = "error"
PHASE_OFF = "off"


@dataclass
class FirmwareConfig:
    registry: AuthRegistry
    ack_mode: bool = False
    location_period_ms: int | None = None
    full_precision: bool = False
    tick_ms: int = 100
    attach_deadline_ms: int = 120000
    gps_window_ms: int = 1000


class Firmware:
    """Single-threaded event-loop runtime over the virtual clock."""

    def __init__(
        self,
        config: FirmwareConfig,
        modem: GsmModem,
        gps: GpsFeed,
        clock: VirtualClock,
        scheduler: Scheduler,
        transcript: Transcript,
    ) -> None:
        self.config = config
        self.modem = modem
        self.gps = gps
        self.clock = clock
        self.scheduler = scheduler
        self.transcript = transcript
        self.state = initial_state()
        self.decoder = NmeaDecoder()
        self.phase = PHASE_OFF
        self._boot_at = 0
        self._epoch = 0  # bumped on boot/halt; stale deferred work is skipped
        self._location_target: str | None = None
        self._next_periodic: int | None = None

    # -- lifecycle -----------------------------------------------------------

    def boot(self, now_ms: int) -> None:
        """Initialize: all-off state, fresh decoder, start the attach poll."""
        self._epoch += 1
        self.state = initial_state()
        self.decoder = NmeaDecoder()
        self.phase = PHASE_BOOT
        self._boot_at = now_ms
        self._location_target = None
        self._next_periodic = None
        self.modem.execute("AT")  # serial sanity ping
        self.transcript.append(now_ms, "boot")
        self._snapshot(now_ms)

    def halt(self) -> None:
        """Power lost: the loop stops dead, nothing is recorded."""
        self._epoch += 1
        self.phase = PHASE_OFF

    # -- loop -----------------------------------------------------------------

    def handle_tick(self, now_ms: int) -> int | None:
        """One loop iteration.  Returns the delay to the next tick, or None
        when the loop must stop (power lost, or terminal error)."""
        if self.phase in (PHASE_OFF, PHASE_ERROR):
            return None
        if self.phase == PHASE_BOOT:
            self._poll_attach(now_ms)
            if self.phase == PHASE_ERROR:
                return None
            return self.config.tick_ms
        busy_ms = self._process_one_sms(now_ms)
        if busy_ms == 0:
            busy_ms = self._maybe_periodic_report(now_ms)
        return busy_ms + self.config.tick_ms

    def _poll_attach(self, now_ms: int) -> None:
        lines = self.modem.execute("AT+CREG?")
        if lines[:1] == ["+CREG: 0,1"]:
            self.modem.execute("AT+CMGF=1")
            self.phase = PHASE_READY
            self.state = replace(self.state, gsm_ready=True)
            self.transcript.append(now_ms, "gsm_ready")
            self._snapshot(now_ms)
        elif now_ms - self._boot_at >= self.config.attach_deadline_ms:
            self.phase = PHASE_ERROR
            self.transcript.append(now_ms, "gsm_attach_failed")

    def _process_one_sms(self, now_ms: int) -> int:
        """Read, delete, and act on the oldest unread SMS.  Returns busy time."""
        lines = self.modem.execute("AT+CMGR=1")
        if not lines or not lines[0].startswith("+CMGR:"):
            if lines[:1] == ["ERROR"]:
                self.transcript.append(now_ms, "modem_error", op="AT+CMGR=1")
            return 0
        quoted = re.findall(r'"([^"]*)"', lines[0])
        sender = quoted[1] if len(quoted) > 1 else ""
        body = lines[1] if len(lines) > 1 else ""
        self.modem.execute("AT+CMGD=1")
        if not authenticate(sender, self.config.registry):
            self.transcript.append(now_ms, "auth_rejected", **{"from": sender})
            return 0
        command = parse_command(body)
        if command is None:
            self.transcript.append(now_ms, "cmd_ignored", **{"from": sender}, body=body)
            return 0
        return self._dispatch(command, sender, now_ms)

    def _dispatch(self, command: Command, sender: str, now_ms: int) -> int:
        self.state, _effects = apply_command(self.state, command)
        try:
            code = multiplex_code_for(command)
            mux = [code.s0, code.s1, code.s2]
        except NotMultiplexed:
            mux = None
        self.transcript.append(
            now_ms, "command_applied", command=command.tag, **{"from": sender}, multiplex=mux
        )
        self._snapshot(now_ms)
        if command is Command.LOCATION_ON:
            self._location_target = sender
            busy = self._send_location_report(sender, now_ms)
            if self.config.location_period_ms:
                self._next_periodic = now_ms + busy + self.config.location_period_ms
            return busy
        if command is Command.LOCATION_OFF:
            # Future sends only; an already-scheduled report is not recalled.
            self._location_target = None
            self._next_periodic = None
            return 0
        if self.config.ack_mode:
            self._send_sms(sender, canonical_text(command), now_ms)
        return 0

    def _maybe_periodic_report(self, now_ms: int) -> int:
        if (
            self._next_periodic is None
            or self._location_target is None
            or not self.state.location_mode
            or now_ms < self._next_periodic
        ):
            return 0
        busy = self._send_location_report(self._location_target, now_ms)
        period = self.config.location_period_ms or 0
        self._next_periodic = max(self._next_periodic + period, now_ms + busy)
        return busy

    def _send_location_report(self, to: str, now_ms: int) -> int:
        """Acquire for one window, then send the link once the window closes.

        The acquisition consumes gps_window_ms of virtual time, so the
        actual AT+CMGS happens as a deferred event at window end; the next
        loop tick is pushed past it by the returned busy time.
        """
        window = self.config.gps_window_ms
        fix = acquire_fix(self.decoder, self.gps, now_ms, window_ms=window)
        link = compose_maps_link(fix, full_precision=self.config.full_precision)
        epoch = self._epoch

        def fire() -> None:
            if self._epoch != epoch or self.phase != PHASE_READY:
                return  # restarted or powered down inside the window
            self._send_sms(to, link, self.clock.now_ms)

        self.scheduler.at(now_ms + window, fire)
        return window

    def _send_sms(self, to: str, body: str, now_ms: int) -> None:
        lines = self.modem.execute(f'AT+CMGS="{to}"')
        if lines != ["> "]:
            self.transcript.append(now_ms, "modem_error", op="AT+CMGS")
            return
        lines = self.modem.execute(body + CTRL_Z)
        if not lines or lines[-1] != "OK":
            self.transcript.append(now_ms, "modem_error", op="AT+CMGS body")

    # -- observation ------------------------------------------------------------

    def _snapshot(self, now_ms: int) -> None:
        self.transcript.append(now_ms, "state_snapshot", **snapshot_payload(self.state))


def snapshot_payload(state: VehicleState) -> dict:
    """Flat record of the seven booleans plus the rendered panel counts."""
    panel = render_panel(state)
    return {
        "position_lights": state.position_lights,
        "head_lights": state.head_lights,
        "brake_lights": state.brake_lights,
        "warning_lights": state.warning_lights,
        "doors_locked": state.doors_locked,
        "gsm_ready": state.gsm_ready,
        "location_mode": state.location_mode,
        "white": panel.white,
        "red": panel.red,
        "yellow": panel.yellow,
        "green": panel.green,
    }
