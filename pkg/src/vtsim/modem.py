"""Simulated GSM shield and the carrier network it talks to.

The modem exposes a text-mode AT command surface to the firmware.  Before
network registration completes (power-on plus the attach delay) only `AT`
and `AT+CREG?` succeed; everything else answers ERROR.  An SMS send is the
usual two-step flow: `AT+CMGS="<number>"` opens body capture, terminator
byte 26 submits.

The network delivers with a seeded uniform 4000..6000 ms latency, clamped
so messages between the same sender/receiver pair never reorder.  Delivery
to an unpowered vehicle drops the message (and logs it) unless
store-and-forward is configured.
"""

from __future__ import annotations

import random
import re
from datetime import datetime, timedelta

from .clock import Scheduler, VirtualClock
from .protocol import SmsMessage, normalize_number
from .transcript import Transcript

CTRL_Z = "\x1a"
DEFAULT_ATTACH_DELAY_MS = 60000

_CMGS_RE = re.compile(r'^AT\+CMGS="([^"]*)"$')
_CMGR_RE = re.compile(r"^AT\+CMGR=(\d+)$")
_CMGD_RE = re.compile(r"^AT\+CMGD=(\d+)$")

_EPOCH = datetime(2000, 1, 1)


def _sms_timestamp(at_ms: int) -> str:
    """Text-mode service-center timestamp for a virtual instant."""
    stamp = _EPOCH + timedelta(milliseconds=at_ms)
    return stamp.strftime("%y/%m/%d,%H:%M:%S+00")


class GsmModem:
    """One vehicle-side modem: inbox, registration state, AT dispatcher."""

    def __init__(
        self,
        sim_number: str,
        clock: VirtualClock,
        attach_delay_ms: int | None = DEFAULT_ATTACH_DELAY_MS,
        send_fn=None,
    ) -> None:
        self.sim_number = normalize_number(sim_number)
        self._clock = clock
        self.attach_delay_ms = attach_delay_ms  # None: never registers
        self._send_fn = send_fn  # (sender, to, body, now_ms) -> None
        self.inbox: list[SmsMessage] = []
        self.powered = False
        self.text_mode = False
        self.ready_at: int | None = None
        self._pending_to: str | None = None
        self._body_buf = ""
        self._ref = 0

    # -- power and lifecycle ---------------------------------------------

    def power_on(self, now_ms: int) -> None:
        self.powered = True
        self._arm_attach(now_ms)

    def power_off(self, now_ms: int) -> None:
        self.powered = False
        self.ready_at = None
        self.text_mode = False
        self._pending_to = None
        self._body_buf = ""

    def reset(self, now_ms: int) -> None:
        """Re-attach after a system restart; SIM-stored inbox survives."""
        self.text_mode = False
        self._pending_to = None
        self._body_buf = ""
        self._arm_attach(now_ms)

    def _arm_attach(self, now_ms: int) -> None:
        if self.attach_delay_ms is None:
            self.ready_at = None
        else:
            self.ready_at = now_ms + self.attach_delay_ms

    def is_registered(self, now_ms: int) -> bool:
        return self.powered and self.ready_at is not None and now_ms >= self.ready_at

    # -- network side ------------------------------------------------------

    def deliver(self, msg: SmsMessage) -> bool:
        """Accept a message into the inbox; False when unpowered."""
        if not self.powered:
            return False
        self.inbox.append(msg)
        return True

    # -- AT command surface -------------------------------------------------

    def execute(self, data: str) -> list[str]:
        """Process one AT command line (or an SMS body chunk) and respond.

        An unpowered modem is a dead line: no response at all.
        """
        if not self.powered:
            return []
        now = self._clock.now_ms
        if self._pending_to is not None:
            return self._capture_body(data, now)
        line = data.rstrip("\r\n")
        if line == "AT":
            return ["OK"]
        if line == "AT+CREG?":
            status = 1 if self.is_registered(now) else 2
            return [f"+CREG: 0,{status}", "OK"]
        if not self.is_registered(now):
            return ["ERROR"]
        if line == "AT+CMGF=1":
            self.text_mode = True
            return ["OK"]
        if line.startswith("AT+CMGF"):
            return ["ERROR"]  # PDU mode and malformed variants rejected
        m = _CMGS_RE.match(line)
        if m:
            if not self.text_mode:
                return ["ERROR"]
            try:
                self._pending_to = normalize_number(m.group(1))
            except ValueError:
                return ["ERROR"]
            self._body_buf = ""
            return ["> "]
        m = _CMGR_RE.match(line)
        if m:
            slot = int(m.group(1))
            if not 1 <= slot <= len(self.inbox):
                return ["OK"]
            msg = self.inbox[slot - 1]
            header = (
                f'+CMGR: "REC UNREAD","{msg.sender}",,'
                f'"{_sms_timestamp(msg.delivered_at or msg.submitted_at)}"'
            )
            return [header, msg.body, "OK"]
        m = _CMGD_RE.match(line)
        if m:
            slot = int(m.group(1))
            if 1 <= slot <= len(self.inbox):
                del self.inbox[slot - 1]
            return ["OK"]
        return ["ERROR"]

    def _capture_body(self, data: str, now_ms: int) -> list[str]:
        if CTRL_Z not in data:
            self._body_buf += data
            return []
        chunk, _, _ = data.partition(CTRL_Z)
        body = self._body_buf + chunk
        to = self._pending_to
        self._pending_to = None
        self._body_buf = ""
        try:
            SmsMessage(sender=self.sim_number, body=body, submitted_at=now_ms)
        except ValueError:
            return ["ERROR"]
        self._ref += 1
        if self._send_fn is not None:
            self._send_fn(self.sim_number, to, body, now_ms)
        return [f"+CMGS: {self._ref}", "OK"]


class SmsNetwork:
    """Carrier model: seeded latency draw, per-pair FIFO, power-aware delivery."""

    def __init__(
        self,
        scheduler: Scheduler,
        transcript: Transcript,
        seed: int = 0,
        latency_min_ms: int = 4000,
        latency_max_ms: int = 6000,
        store_and_forward: bool = False,
    ) -> None:
        if latency_min_ms > latency_max_ms:
            raise ValueError("latency_min_ms exceeds latency_max_ms")
        self._scheduler = scheduler
        self._transcript = transcript
        self._rng = random.Random(seed)
        self.latency_min_ms = latency_min_ms
        self.latency_max_ms = latency_max_ms
        self.store_and_forward = store_and_forward
        self._modems: dict[str, GsmModem] = {}
        self._last_due: dict[tuple[str, str], int] = {}
        self._stored: list[tuple[SmsMessage, str]] = []

    def register_modem(self, modem: GsmModem) -> None:
        self._modems[modem.sim_number] = modem

    def submit(self, sender: str, to: str, body: str, now_ms: int) -> None:
        """Accept a message and schedule its delivery.

        The due time is now + U[latency_min, latency_max], then clamped to
        the previous due time of the same (sender, to) pair so in-order
        submission means in-order delivery.  The clamp keeps the latency
        bound: the predecessor was submitted no later, so its due time is
        at most our submission + latency_max.
        """
        sender = normalize_number(sender)
        to = normalize_number(to)
        SmsMessage(sender=sender, body=body, submitted_at=now_ms)  # validate first
        self._transcript.append(
            now_ms, "sms_submitted", **{"from": sender, "to": to, "body": body}
        )
        latency = self._rng.randrange(self.latency_min_ms, self.latency_max_ms + 1)
        due = now_ms + latency
        pair = (sender, to)
        prev = self._last_due.get(pair)
        if prev is not None and due < prev:
            due = prev
        self._last_due[pair] = due
        msg = SmsMessage(sender=sender, body=body, submitted_at=now_ms, delivered_at=due)
        self._scheduler.at(due, lambda: self._deliver(msg, to))

    def _deliver(self, msg: SmsMessage, to: str) -> None:
        latency = (msg.delivered_at or 0) - msg.submitted_at
        assert self.latency_min_ms <= latency <= self.latency_max_ms
        modem = self._modems.get(to)
        if modem is None or modem.deliver(msg):
            # Phones (non-vehicle endpoints) always receive.
            self._transcript.append(
                msg.delivered_at or 0,
                "sms_delivered",
                **{"from": msg.sender, "to": to, "body": msg.body, "latency_ms": latency},
            )
            return
        if self.store_and_forward:
            self._stored.append((msg, to))
            return
        self._transcript.append(
            msg.delivered_at or 0,
            "sms_dropped",
            **{"from": msg.sender, "to": to, "body": msg.body, "reason": "unpowered"},
        )

    def flush_stored(self, now_ms: int) -> None:
        """Retry held messages (store-and-forward mode) after power returns."""
        held, self._stored = self._stored, []
        for msg, to in held:
            modem = self._modems.get(to)
            if modem is not None and modem.deliver(
                SmsMessage(msg.sender, msg.body, msg.submitted_at, now_ms)
            ):
                self._transcript.append(
                    now_ms,
                    "sms_delivered",
                    **{
                        "from": msg.sender,
                        "to": to,
                        "body": msg.body,
                        "latency_ms": now_ms - msg.submitted_at,
                    },
                )
            else:
                self._stored.append((msg, to))
