"""Deterministic scenario runner.

Wires clock, power model, modem, carrier network, GPS feed, and firmware,
then replays a scenario's events on the virtual clock.  The same scenario
and seed always produce a byte-identical transcript.

The power model follows the two-source design: the system is alive while
either the main or the backup battery is on, with zero switchover gap.
Losing both halts everything mid-flight; restoring power cold-boots the
unit (fresh state, fresh network attach), and messages that came due
during the outage were dropped by the carrier and logged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .clock import Scheduler, VirtualClock
from .firmware import Firmware, FirmwareConfig
from .gpsfeed import GpsFeed, waypoints_to_nmea
from .modem import GsmModem, SmsNetwork
from .protocol import AuthRegistry
from .scenario import (
    InboundSms,
    PowerEvent,
    RestartEvent,
    Scenario,
    ScenarioConfig,
    Waypoint,
)
from .transcript import Transcript


@dataclass
class PowerModel:
    main: bool = True
    backup: bool = True

    @property
    def powered(self) -> bool:
        return self.main or self.backup


class SimWorld:
    """One simulated vehicle plus its environment."""

    def __init__(self, scenario: Scenario) -> None:
        self.scenario = scenario
        cfg = scenario.config
        self.clock = VirtualClock()
        self.scheduler = Scheduler(self.clock)
        self.transcript = Transcript()
        self.power = PowerModel(main=cfg.main_power, backup=cfg.backup_power)
        self.gps = GpsFeed(
            waypoints_to_nmea(e for e in scenario.events if isinstance(e, Waypoint))
        )
        self.network = SmsNetwork(
            self.scheduler,
            self.transcript,
            seed=cfg.seed,
            latency_min_ms=cfg.latency_min_ms,
            latency_max_ms=cfg.latency_max_ms,
            store_and_forward=cfg.store_and_forward,
        )
        self.modem = GsmModem(
            cfg.sim_number,
            self.clock,
            attach_delay_ms=cfg.attach_delay_ms,
            send_fn=self.network.submit,
        )
        self.network.register_modem(self.modem)
        registry = AuthRegistry(owner=cfg.owner, additional_authorized=frozenset(cfg.authorized))
        self.firmware = Firmware(
            FirmwareConfig(
                registry=registry,
                ack_mode=cfg.ack_mode,
                location_period_ms=cfg.location_period_ms,
                full_precision=cfg.full_precision,
                tick_ms=cfg.tick_ms,
                attach_deadline_ms=cfg.attach_deadline_ms,
            ),
            self.modem,
            self.gps,
            self.clock,
            self.scheduler,
            self.transcript,
        )
        self._chain_gen = 0

    # -- lifecycle -------------------------------------------------------

    def start(self) -> None:
        """Boot at t=0 if the batteries allow it; schedule scripted stimuli."""
        if self.power.powered:
            self.scheduler.at(0, lambda: self._start_unit(self.clock.now_ms, cold=True))
        for event in self.scenario.events:
            self.scheduler.at(event.at_ms, lambda e=event: self._handle_event(e))

    def run(self) -> Transcript:
        """Batch mode: replay to the last event plus the drain window."""
        self.start()
        horizon = self.scenario.last_event_ms + self.scenario.config.drain_ms
        self.scheduler.run_until(horizon)
        return self.transcript

    # -- stimulus handling --------------------------------------------------

    def _handle_event(self, event) -> None:
        now = self.clock.now_ms
        if isinstance(event, InboundSms):
            self.inject_sms(event.sender, event.body, now)
        elif isinstance(event, PowerEvent):
            self.set_power(event.source, event.on, now)
        elif isinstance(event, RestartEvent):
            self.do_restart(now)
        # Waypoints were pre-baked into the GPS feed timetable.

    def inject_sms(self, sender: str, body: str, now_ms: int) -> None:
        self.network.submit(sender, self.modem.sim_number, body, now_ms)

    def set_power(self, source: str, on: bool, now_ms: int) -> None:
        was_powered = self.power.powered
        if source == "main":
            self.power.main = on
        elif source == "backup":
            self.power.backup = on
        else:
            raise ValueError(f"unknown power source {source!r}")
        self.transcript.append(now_ms, "power", source=source, on=on)
        if was_powered and not self.power.powered:
            self._halt_unit(now_ms)
        elif not was_powered and self.power.powered:
            self._start_unit(now_ms, cold=True)
            self.network.flush_stored(now_ms)

    def do_restart(self, now_ms: int) -> None:
        """Reboot the unit; without power the button does nothing."""
        if not self.power.powered:
            return
        self.transcript.append(now_ms, "restart")
        self._start_unit(now_ms, cold=False)

    # -- unit plumbing ---------------------------------------------------------

    def _halt_unit(self, now_ms: int) -> None:
        self.firmware.halt()
        self.modem.power_off(now_ms)
        self.gps.discard_until(now_ms)
        self._chain_gen += 1  # orphan any scheduled tick

    def _start_unit(self, now_ms: int, cold: bool) -> None:
        if cold and not self.modem.powered:
            self.modem.power_on(now_ms)
        else:
            self.modem.reset(now_ms)
        if now_ms > 0:
            self.gps.discard_until(now_ms)
        self.firmware.boot(now_ms)
        self._chain_gen += 1
        self._schedule_tick(now_ms, self._chain_gen)

    def _schedule_tick(self, t_ms: int, gen: int) -> None:
        def tick() -> None:
            if gen != self._chain_gen:
                return  # superseded by a restart or power cycle
            delay = self.firmware.handle_tick(self.clock.now_ms)
            if delay is not None:
                self._schedule_tick(self.clock.now_ms + delay, gen)

        self.scheduler.at(t_ms, tick)


def run_scenario(scenario: Scenario) -> Transcript:
    """Convenience: build a world, run it, hand back the transcript."""
    return SimWorld(scenario).run()


def scenario_from_transcript(records: list[dict], config: ScenarioConfig) -> Scenario:
    """Rebuild the stimulus script a transcript records.

    Inbound submissions, power transitions and restarts become events at
    their recorded virtual times; replaying them in batch with the same
    config reproduces the run.  Waypoints cannot be recovered from a
    transcript and must come from the original scenario.
    """
    events: list = []
    for r in records:
        if r["type"] == "sms_submitted" and r["from"] != config.sim_number:
            events.append(InboundSms(at_ms=r["t"], sender=r["from"], body=r["body"]))
        elif r["type"] == "power":
            events.append(PowerEvent(at_ms=r["t"], source=r["source"], on=r["on"]))
        elif r["type"] == "restart":
            events.append(RestartEvent(at_ms=r["t"]))
    events.sort(key=lambda e: e.at_ms)
    return Scenario(config=config, events=tuple(events))
