import random

import pytest
from hypothesis import given, strategies as st

from vtsim.protocol import (
    AuthRegistry,
    Command,
    SmsMessage,
    authenticate,
    canonical_command_table,
    canonical_text,
    normalize_number,
    parse_command,
    set_owner,
)

OWNER = "+40722000001"
STRANGER = "+40733999999"


class TestCommandTable:
    def test_exactly_twelve_entries(self):
        table = canonical_command_table()
        assert len(table) == 12
        assert len({e.text for e in table}) == 12

    def test_first_bytes_are_the_index_characters(self):
        firsts = [e.text[0] for e in canonical_command_table()]
        assert firsts == list("0123456789ab")

    def test_stored_length_matches_byte_length(self):
        for entry in canonical_command_table():
            assert entry.length == len(entry.text.encode("ascii"))

    def test_table_contents(self):
        expected = {
            "0lights: ON": Command.POSITION_LIGHTS_ON,
            "1lights: OFF": Command.POSITION_LIGHTS_OFF,
            "2head: ON": Command.HEAD_LIGHTS_ON,
            "3head: OFF": Command.HEAD_LIGHTS_OFF,
            "4brake: ON": Command.BRAKE_LIGHTS_ON,
            "5brake: OFF": Command.BRAKE_LIGHTS_OFF,
            "6warning: ON": Command.WARNING_ON,
            "7warning: OFF": Command.WARNING_OFF,
            "8location: ON": Command.LOCATION_ON,
            "9location: OFF": Command.LOCATION_OFF,
            "adoors: ON": Command.DOORS_LOCK,
            "bdoors: OFF": Command.DOORS_UNLOCK,
        }
        assert {e.text: e.command for e in canonical_command_table()} == expected

    def test_each_command_has_one_text(self):
        commands = [e.command for e in canonical_command_table()]
        assert len(set(commands)) == 12
        assert set(commands) == set(Command)


class TestParseCommand:
    def test_round_trip_all_twelve(self):
        for command in Command:
            assert parse_command(canonical_text(command)) is command

    def test_examples(self):
        assert parse_command("4brake: ON") is Command.BRAKE_LIGHTS_ON
        assert parse_command("") is None
        assert parse_command("4BRAKE: ON") is None  # case-sensitive

    def test_bytes_input(self):
        assert parse_command(b"6warning: ON") is Command.WARNING_ON
        assert parse_command(b"\xff\xfe") is None

    def test_every_single_byte_substitution_rejected(self):
        # Exhaustive: replacing any one byte with any other printable byte
        # must yield no match (byte-exact comparison oracle).
        texts = {e.text for e in canonical_command_table()}
        for text in texts:
            for i in range(len(text)):
                for sub in (chr(c) for c in range(0x20, 0x7F)):
                    if sub == text[i]:
                        continue
                    mutated = text[:i] + sub + text[i + 1 :]
                    if mutated in texts:  # distinct table rows resemble each other
                        continue
                    assert parse_command(mutated) is None

    def test_truncations_rejected(self):
        for entry in canonical_command_table():
            for n in range(len(entry.text)):
                assert parse_command(entry.text[:n]) is None

    def test_whitespace_insertion_rejected(self):
        rng = random.Random(2024)
        for entry in canonical_command_table():
            for _ in range(20):
                i = rng.randrange(len(entry.text) + 1)
                assert parse_command(entry.text[:i] + " " + entry.text[i:]) is None

    def test_case_flips_rejected(self):
        for entry in canonical_command_table():
            for i, ch in enumerate(entry.text):
                flipped = ch.swapcase()
                if flipped == ch:
                    continue
                assert parse_command(entry.text[:i] + flipped + entry.text[i + 1 :]) is None

    @given(st.text(alphabet=st.characters(min_codepoint=32, max_codepoint=126), max_size=40))
    def test_random_text_only_matches_table(self, body):
        texts = {e.text for e in canonical_command_table()}
        result = parse_command(body)
        assert (result is not None) == (body in texts)


class TestNormalizeNumber:
    def test_basic_forms(self):
        assert normalize_number("+40722000001") == "+40722000001"
        assert normalize_number("0040722000001") == "+40722000001"
        assert normalize_number("40 722-000-001") == "+40722000001"
        assert normalize_number("+40 (722) 000.001") == "+40722000001"

    def test_idempotent(self):
        once = normalize_number("+1 (555) 010-9999")
        assert normalize_number(once) == once

    @pytest.mark.parametrize("bad", ["", "+", "12345", "+1234567890123456", "call-me", "+40abc1234"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ValueError):
            normalize_number(bad)


class TestSmsMessage:
    def test_body_length_capped_at_160(self):
        SmsMessage(sender=OWNER, body="x" * 160, submitted_at=0)
        with pytest.raises(ValueError):
            SmsMessage(sender=OWNER, body="x" * 161, submitted_at=0)

    def test_body_must_be_printable_ascii(self):
        with pytest.raises(ValueError):
            SmsMessage(sender=OWNER, body="ping\x00", submitted_at=0)
        with pytest.raises(ValueError):
            SmsMessage(sender=OWNER, body="héllo", submitted_at=0)

    def test_delivery_never_precedes_submission(self):
        SmsMessage(sender=OWNER, body="ok", submitted_at=5, delivered_at=5)
        with pytest.raises(ValueError):
            SmsMessage(sender=OWNER, body="ok", submitted_at=5, delivered_at=4)


class TestAuthentication:
    def test_owner_always_authorized(self):
        registry = AuthRegistry(owner=OWNER)
        assert authenticate(OWNER, registry)

    def test_stranger_rejected(self):
        registry = AuthRegistry(owner=OWNER)
        assert not authenticate(STRANGER, registry)

    def test_additional_numbers_authorized(self):
        registry = AuthRegistry(owner=OWNER, additional_authorized=frozenset({STRANGER}))
        assert authenticate(STRANGER, registry)

    def test_pure_membership(self):
        registry = AuthRegistry(owner=OWNER, additional_authorized=frozenset({STRANGER}))
        results = [authenticate(STRANGER, registry) for _ in range(5)]
        assert results == [True] * 5

    def test_set_owner_then_authenticate(self):
        registry = AuthRegistry(owner=OWNER)
        new = set_owner(registry, STRANGER)
        assert authenticate(STRANGER, new)
        assert not authenticate(OWNER, new)  # old owner dropped

    def test_set_owner_keeps_additional_set(self):
        extra = "+40744123456"
        registry = AuthRegistry(owner=OWNER, additional_authorized=frozenset({extra}))
        new = set_owner(registry, STRANGER)
        assert authenticate(extra, new)

    def test_set_owner_idempotent(self):
        registry = AuthRegistry(owner=OWNER)
        once = set_owner(registry, STRANGER)
        twice = set_owner(once, STRANGER)
        assert once == twice

    def test_set_owner_rejects_malformed_number(self):
        registry = AuthRegistry(owner=OWNER)
        with pytest.raises(ValueError):
            set_owner(registry, "not-a-number")
        assert registry.owner == OWNER  # unchanged

    def test_registry_normalizes_numbers(self):
        registry = AuthRegistry(owner="0040722000001")
        assert authenticate("+40722000001", registry)
