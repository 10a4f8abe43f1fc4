import pytest

from vtsim.scenario import (
    InboundSms,
    PowerEvent,
    RestartEvent,
    ScenarioError,
    Waypoint,
    load_scenario,
    parse_scenario,
)


class TestParsing:
    def test_minimal_single_sms(self):
        s = parse_scenario('1000 sms +40722000001 "6warning: ON"\n')
        assert len(s.events) == 1
        event = s.events[0]
        assert isinstance(event, InboundSms)
        assert event.at_ms == 1000
        assert event.sender == "+40722000001"
        assert event.body == "6warning: ON"

    def test_body_keeps_internal_spaces_and_case(self):
        s = parse_scenario('5 sms +40722000001 "  WeIrD   bOdY  "\n')
        assert s.events[0].body == "  WeIrD   bOdY  "

    def test_all_event_kinds(self):
        text = """
set seed 3
100 waypoint 44.44212 26.04938 7 120
200 power main off
300 power backup on
400 restart
"""
        s = parse_scenario(text)
        assert isinstance(s.events[0], Waypoint)
        assert s.events[0].hdop_hundredths == 120
        assert isinstance(s.events[1], PowerEvent) and not s.events[1].on
        assert isinstance(s.events[2], PowerEvent) and s.events[2].on
        assert isinstance(s.events[3], RestartEvent)

    def test_comments_and_blank_lines_skipped(self):
        s = parse_scenario("# heading\n\n   # indented comment\n10 restart\n")
        assert len(s.events) == 1

    def test_config_block(self):
        text = """
set seed 99
set owner +40711111111
set sim_number +40722222222
set authorized +40733333333
set authorized +40744444444
set attach_delay 30000
set attach_deadline 90000
set ack_mode on
set tick_ms 50
set latency_min 4000
set latency_max 6000
set location_period_ms 5000
set full_precision on
set store_and_forward on
set main_power off
set backup_power on
set drain_ms 9000
"""
        cfg = parse_scenario(text).config
        assert cfg.seed == 99
        assert cfg.owner == "+40711111111"
        assert cfg.sim_number == "+40722222222"
        assert cfg.authorized == ("+40733333333", "+40744444444")
        assert cfg.attach_delay_ms == 30000
        assert cfg.attach_deadline_ms == 90000
        assert cfg.ack_mode is True
        assert cfg.tick_ms == 50
        assert cfg.location_period_ms == 5000
        assert cfg.full_precision is True
        assert cfg.store_and_forward is True
        assert cfg.main_power is False
        assert cfg.backup_power is True
        assert cfg.drain_ms == 9000

    def test_attach_delay_never(self):
        cfg = parse_scenario("set attach_delay never\n").config
        assert cfg.attach_delay_ms is None

    def test_ties_keep_file_order(self):
        s = parse_scenario('10 sms +40722000001 "a"\n10 sms +40722000001 "b"\n')
        assert [e.body for e in s.events] == ["a", "b"]


class TestRejection:
    def test_out_of_order_events_rejected(self):
        with pytest.raises(ScenarioError) as info:
            parse_scenario("200 restart\n100 restart\n")
        assert "out of order" in str(info.value)
        assert info.value.line == 2

    def test_error_carries_line_and_column(self):
        with pytest.raises(ScenarioError) as info:
            parse_scenario("10 restart\nbogus line here\n")
        assert info.value.line == 2
        assert info.value.column == 1

    @pytest.mark.parametrize(
        "text",
        [
            "set nonsense 42\n",
            "set seed\n",
            "10 teleport 1 2\n",
            "10 sms +40722000001 no-quotes\n",
            "10 waypoint 1 2 3\n",
            "10 waypoint 91.0 0.0 4 100\n",
            "10 power solar on\n",
            "10 restart now\n",
            "-5 restart\n",
            "10 sms not-a-number \"x\"\n",
        ],
    )
    def test_malformed_lines_rejected(self, text):
        with pytest.raises(ScenarioError):
            parse_scenario(text)

    def test_config_after_events_rejected(self):
        with pytest.raises(ScenarioError):
            parse_scenario("10 restart\nset seed 1\n")

    def test_overlong_sms_body_rejected(self):
        with pytest.raises(ScenarioError):
            parse_scenario(f'10 sms +40722000001 "{"x" * 200}"\n')


class TestShippedScenarios:
    def test_paper_demo_shape(self):
        from importlib import resources

        text = resources.files("vtsim").joinpath("scenarios/paper_demo.scn").read_text()
        s = parse_scenario(text)
        sms = [e for e in s.events if isinstance(e, InboundSms)]
        waypoints = [e for e in s.events if isinstance(e, Waypoint)]
        # Every canonical command once, plus one extra location request.
        assert len(sms) == 13
        from vtsim.protocol import canonical_command_table

        canonical = [e.text for e in canonical_command_table()]
        assert [m.body for m in sms[:12]] == canonical
        assert sms[12].body == "8location: ON"
        assert len(waypoints) == 2

    def test_load_scenario_from_path(self, tmp_path):
        path = tmp_path / "one.scn"
        path.write_text('5 restart\n', encoding="ascii")
        s = load_scenario(path)
        assert len(s.events) == 1
