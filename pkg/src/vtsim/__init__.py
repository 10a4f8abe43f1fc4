"""Deterministic simulator of an SMS-controlled vehicle tracking unit.

The firmware of a GSM/GPS anti-theft controller runs against simulated
peripherals on a virtual millisecond clock: scripted scenarios drive the
modem, the carrier network (4-6 s SMS latency), the GPS byte stream and
the power rails, and every observable event lands in a replayable
transcript.
"""

from .protocol import (
    AuthRegistry,
    Command,
    CommandEntry,
    SmsMessage,
    authenticate,
    canonical_command_table,
    canonical_text,
    normalize_number,
    parse_command,
    set_owner,
)
from .vehicle import (
    LedPanel,
    MultiplexCode,
    NotMultiplexed,
    PanelDelta,
    VehicleState,
    apply_command,
    gsm_status_leds,
    initial_state,
    multiplex_code_for,
    render_panel,
)
from .nmea import GpsFix, NmeaDecoder, ZERO_FIX, checksum, dm_to_degrees
from .location import (
    acquire_fix,
    compose_location_text,
    compose_maps_link,
    format_coord,
    parse_maps_link,
)
from .gpsfeed import GpsFeed, degrees_to_dm, gga_sentence, waypoints_to_nmea
from .modem import GsmModem, SmsNetwork
from .firmware import Firmware, FirmwareConfig, snapshot_payload
from .scenario import (
    InboundSms,
    PowerEvent,
    RestartEvent,
    Scenario,
    ScenarioConfig,
    ScenarioError,
    Waypoint,
    load_scenario,
    parse_scenario,
)
from .harness import SimWorld, run_scenario, scenario_from_transcript
from .transcript import Transcript, TranscriptError

__version__ = "0.1.0"
