"""Firmware behavior, driven end to end through scripted scenarios."""

import dataclasses

from vtsim.harness import run_scenario
from vtsim.protocol import Command
from vtsim.scenario import parse_scenario
from vtsim.vehicle import apply_command, initial_state

OWNER = "+40722000001"
SIM = "+40740000000"
STRANGER = "+40733999999"

BASE = f"set seed 5\nset owner {OWNER}\nset sim_number {SIM}\nset attach_delay 0\n"

GOLDEN_LINK = "https://www.google.ro/maps/place/44.44212+26.04938/@44.44212,26.04938,17z/"


def run_text(text: str):
    return run_scenario(parse_scenario(text))


def outbound(transcript):
    return [r for r in transcript.of_type("sms_submitted") if r["from"] == SIM]


def final_snapshot(transcript):
    return transcript.of_type("state_snapshot")[-1]


class TestAttachProtocol:
    def test_default_config_ready_at_exactly_sixty_seconds(self):
        transcript = run_text("set attach_delay 60000\nset drain_ms 70000\n")
        ready = transcript.of_type("gsm_ready")
        assert len(ready) == 1
        assert ready[0]["t"] == 60000

    def test_zero_delay_ready_at_zero(self):
        transcript = run_text(BASE)
        assert transcript.of_type("gsm_ready")[0]["t"] == 0

    def test_attach_failure_enters_error_and_dispatches_nothing(self):
        text = (
            "set attach_delay never\n"
            "set attach_deadline 5000\n"
            "set drain_ms 30000\n"
            f'6000 sms {OWNER} "6warning: ON"\n'
        )
        transcript = run_text(text)
        failed = transcript.of_type("gsm_attach_failed")
        assert len(failed) == 1
        assert failed[0]["t"] == 5000
        assert transcript.of_type("gsm_ready") == []
        assert transcript.of_type("command_applied") == []
        assert outbound(transcript) == []

    def test_boot_snapshot_shows_red_gsm_indicator(self):
        transcript = run_text("set attach_delay 60000\n")
        first = transcript.of_type("state_snapshot")[0]
        assert first["gsm_ready"] is False
        assert first["red"] >= 1 and first["green"] == 0


class TestDispatch:
    def test_owner_warning_on_actuates_without_reply(self):
        transcript = run_text(BASE + f'1000 sms {OWNER} "6warning: ON"\n')
        applied = transcript.of_type("command_applied")
        assert [r["command"] for r in applied] == ["WarningOn"]
        assert applied[0]["multiplex"] == [1, 1, 1]
        snap = final_snapshot(transcript)
        assert snap["warning_lights"] is True
        assert snap["yellow"] == 4
        assert outbound(transcript) == []  # ack off by default

    def test_stranger_is_silently_rejected(self):
        transcript = run_text(BASE + f'1000 sms {STRANGER} "6warning: ON"\n')
        assert transcript.of_type("command_applied") == []
        assert len(transcript.of_type("auth_rejected")) == 1
        assert outbound(transcript) == []
        assert final_snapshot(transcript)["warning_lights"] is False

    def test_garbled_body_silently_ignored(self):
        transcript = run_text(BASE + f'1000 sms {OWNER} "6warning: on"\n')
        ignored = transcript.of_type("cmd_ignored")
        assert len(ignored) == 1
        assert ignored[0]["body"] == "6warning: on"
        assert transcript.of_type("command_applied") == []
        assert outbound(transcript) == []

    def test_additional_authorized_sender_accepted(self):
        text = BASE + f"set authorized {STRANGER}\n" + f'1000 sms {STRANGER} "adoors: ON"\n'
        transcript = run_text(text)
        assert final_snapshot(transcript)["doors_locked"] is True

    def test_location_on_replies_with_golden_link(self):
        text = BASE + (
            "1000 waypoint 44.44212 26.04938 7 120\n"
            f'2000 sms {OWNER} "8location: ON"\n'
        )
        transcript = run_text(text)
        replies = outbound(transcript)
        assert len(replies) == 1
        assert replies[0]["body"] == GOLDEN_LINK
        assert replies[0]["to"] == OWNER
        # The reply reaches the owner's phone through the same carrier model.
        delivered = [r for r in transcript.of_type("sms_delivered") if r["to"] == OWNER]
        assert len(delivered) == 1
        assert 4000 <= delivered[0]["latency_ms"] <= 6000

    def test_location_without_fix_sends_zero_link(self):
        transcript = run_text(BASE + f'1000 sms {OWNER} "8location: ON"\n')
        replies = outbound(transcript)
        assert len(replies) == 1
        assert replies[0]["body"] == (
            "https://www.google.ro/maps/place/0.000000+0.000000"
            "/@0.000000,0.000000,17z/"
        )

    def test_location_reply_sent_after_acquisition_window(self):
        text = BASE + (
            "1000 waypoint 44.44212 26.04938 7 120\n"
            f'2000 sms {OWNER} "8location: ON"\n'
        )
        transcript = run_text(text)
        applied = [r for r in transcript.of_type("command_applied")
                   if r["command"] == "LocationOn"][0]
        reply = outbound(transcript)[0]
        assert reply["t"] == applied["t"] + 1000  # one acquisition window later

    def test_ack_mode_echoes_canonical_text(self):
        text = BASE + "set ack_mode on\n" + f'1000 sms {OWNER} "4brake: ON"\n'
        transcript = run_text(text)
        replies = outbound(transcript)
        assert len(replies) == 1
        assert replies[0]["body"] == "4brake: ON"

    def test_one_message_per_loop_iteration(self):
        # Two messages land in the same inbox; they are applied on distinct ticks.
        text = BASE + (
            f'1000 sms {OWNER} "0lights: ON"\n'
            f'1001 sms {OWNER} "2head: ON"\n'
        )
        transcript = run_text(text)
        applied = transcript.of_type("command_applied")
        assert len(applied) == 2
        assert applied[0]["t"] < applied[1]["t"]

    def test_periodic_location_reports(self):
        text = BASE + (
            "set location_period_ms 5000\n"
            "set drain_ms 30000\n"
            "1000 waypoint 44.44212 26.04938 7 120\n"
            f'2000 sms {OWNER} "8location: ON"\n'
        )
        transcript = run_text(text)
        assert len(outbound(transcript)) >= 3  # initial reply plus periodic resends

    def test_location_off_stops_periodic_reports(self):
        text = BASE + (
            "set location_period_ms 5000\n"
            "set drain_ms 40000\n"
            "1000 waypoint 44.44212 26.04938 7 120\n"
            f'2000 sms {OWNER} "8location: ON"\n'
            f'9000 sms {OWNER} "9location: OFF"\n'
        )
        transcript = run_text(text)
        off_at = [r for r in transcript.of_type("command_applied")
                  if r["command"] == "LocationOff"][0]["t"]
        assert all(r["t"] <= off_at + 1000 for r in outbound(transcript))
        assert final_snapshot(transcript)["location_mode"] is False


class TestTranscriptProperties:
    COMMANDS = [
        "0lights: ON", "6warning: ON", "adoors: ON", "junk",
        "2head: ON", "4BRAKE: ON", "1lights: OFF", "bdoors: OFF",
    ]

    def build(self):
        lines = [BASE]
        t = 1000
        for i, body in enumerate(self.COMMANDS):
            sender = STRANGER if i % 3 == 2 else OWNER
            lines.append(f'{t} sms {sender} "{body}"\n')
            t += 7000
        return run_text("".join(lines))

    def test_silent_failure_property(self):
        # An outbound SMS exists only if some inbound was authenticated and matched.
        transcript = self.build()
        matched = transcript.of_type("command_applied")
        replies = outbound(transcript)
        if not matched:
            assert replies == []
        location_requests = [r for r in matched if r["command"] == "LocationOn"]
        assert len(replies) == len(location_requests)  # ack off: only location replies

    def test_state_change_property_fold_equals_final_state(self):
        transcript = self.build()
        state = dataclasses.replace(initial_state(), gsm_ready=True)
        for record in transcript.of_type("command_applied"):
            state, _ = apply_command(state, Command(record["command"]))
        snap = final_snapshot(transcript)
        for name in (
            "position_lights", "head_lights", "brake_lights", "warning_lights",
            "doors_locked", "gsm_ready", "location_mode",
        ):
            assert snap[name] == getattr(state, name)

    def test_actuation_within_one_tick_of_delivery(self):
        transcript = self.build()
        deliveries = [r for r in transcript.of_type("sms_delivered") if r["to"] == SIM]
        applied = transcript.of_type("command_applied", "cmd_ignored", "auth_rejected")
        assert len(applied) == len(deliveries)
        for delivery, outcome in zip(deliveries, applied):
            assert 0 <= outcome["t"] - delivery["t"] <= 100
