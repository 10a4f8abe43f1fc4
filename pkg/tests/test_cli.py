import json

from vtsim.cli import main
from vtsim.gpsfeed import gga_sentence
from vtsim.protocol import canonical_command_table


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPrintCommands:
    def test_flag_form(self, capsys):
        code, out, _ = run_cli(capsys, "--print-commands")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 12
        assert lines[0] == "0lights: ON\tPositionLightsOn"
        assert lines[-1] == "bdoors: OFF\tDoorsUnlock"
        table = {e.text: e.command.tag for e in canonical_command_table()}
        assert dict(line.split("\t") for line in lines) == table

    def test_subcommand_form(self, capsys):
        code, out, _ = run_cli(capsys, "print-commands")
        assert code == 0
        assert len(out.splitlines()) == 12


class TestDecodeNmea:
    def test_prints_one_report_line_per_fix(self, capsys, tmp_path):
        stream = gga_sentence(44.44212, 26.04938, 7, 120, at_ms=0) + gga_sentence(
            48.11730, 11.51667, 9, 80, at_ms=1000
        )
        path = tmp_path / "stream.nmea"
        path.write_bytes(stream)
        code, out, _ = run_cli(capsys, "decode-nmea", str(path))
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 2
        assert lines[0] == "LAT=44.442120 LON=26.049380 SAT=7 PREC=120"
        assert lines[1].startswith("LAT=48.117") and lines[1].endswith("SAT=9 PREC=80")

    def test_missing_file_fails(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "decode-nmea", str(tmp_path / "nope"))
        assert code == 2
        assert "error" in err


class TestRun:
    def test_batch_run_to_stdout(self, capsys, tmp_path):
        scn = tmp_path / "mini.scn"
        scn.write_text(
            "set seed 4\nset attach_delay 0\n"
            '1000 sms +40722000001 "6warning: ON"\n',
            encoding="ascii",
        )
        code, out, _ = run_cli(capsys, "run", str(scn))
        assert code == 0
        records = [json.loads(line) for line in out.splitlines()]
        assert records[0]["type"] == "boot"
        assert any(r["type"] == "command_applied" for r in records)

    def test_out_file(self, capsys, tmp_path):
        scn = tmp_path / "mini.scn"
        scn.write_text("set attach_delay 0\n", encoding="ascii")
        out_path = tmp_path / "t.jsonl"
        code, out, _ = run_cli(capsys, "run", str(scn), "--out", str(out_path))
        assert code == 0
        assert out == ""
        assert out_path.read_text().splitlines()[0].startswith('{"t":0,"type":"boot"')

    def test_seed_override_changes_transcript(self, capsys, tmp_path):
        scn = tmp_path / "mini.scn"
        scn.write_text(
            "set seed 4\nset attach_delay 0\n"
            '1000 sms +40722000001 "6warning: ON"\n',
            encoding="ascii",
        )
        _, base, _ = run_cli(capsys, "run", str(scn))
        _, same, _ = run_cli(capsys, "run", str(scn), "--seed", "4")
        _, other, _ = run_cli(capsys, "run", str(scn), "--seed", "5")
        assert base == same
        assert base != other

    def test_builtin_scenario_by_name(self, capsys):
        code, out, _ = run_cli(capsys, "run", "paper_demo")
        assert code == 0
        assert "command_applied" in out

    def test_missing_scenario_fails(self, capsys):
        code, _, err = run_cli(capsys, "run", "no-such-scenario")
        assert code == 2
        assert "error" in err

    def test_scenario_parse_error_reports_position(self, capsys, tmp_path):
        scn = tmp_path / "bad.scn"
        scn.write_text("10 restart\n5 restart\n", encoding="ascii")
        code, _, err = run_cli(capsys, "run", str(scn))
        assert code == 2
        assert "bad.scn:2" in err
