"""Bundled inspection-rover example: fixture paths and trace builder.

The rover model patrols five waypoints, reads radiation levels and
aborts to waypoint 0 when the level is unsafe.  The bundled passing
trace is 243 lines long and mixes canonical event texts, raw names
covered by the bundled mapping, and raw telemetry names left unmapped
on purpose (they exercise permissive stuttering).

The trace layout is frozen; fault positions below index into it.
"""

from __future__ import annotations

from pathlib import Path

from .bench import ParamMismatch, RadiationViolation, SwapAdjacent

FIXTURE_DIR = Path(__file__).resolve().parent / "fixtures"

SPEC_PATH = FIXTURE_DIR / "rover.csp"
SPEC_ONCE_PATH = FIXTURE_DIR / "rover_once.csp"
MAPPING_PATH = FIXTURE_DIR / "rover_mapping.json"
TRACE_PATH = FIXTURE_DIR / "rover_trace_pass.log"
RAW_TRACE_PATH = FIXTURE_DIR / "trace_raw.log"
CONFIG_PATH = FIXTURE_DIR / "rover_config.yaml"

ENTRY = "MAIN"
TRACE_LEN = 243

# Raw telemetry names with no mapping entry; permissive mode stutters
# over them, strict mode rejects them.
STUTTER_NAMES = ("/rover/odom", "/clock", "/rover/battery")

# Mission body, indices 0..30.  Raw names at 0 and 4..6 go through the
# bundled mapping; canonical texts elsewhere parse as themselves.
_PREFIX = (
    "/rover/mission_start",    # 0  -> mission_start
    "/rover/odom",             # 1     stutter
    "/clock",                  # 2     stutter
    "/rover/battery",          # 3     stutter
    "/rover/inspect_2",        # 4  -> inspect.2
    "/rover/radiation_green",  # 5  -> radiation_level.Green
    "/rover/move_2",           # 6  -> move.2
    "/rover/odom",             # 7     stutter
    "inspect.0",               # 8
    "radiation_level.Green",   # 9
    "move.0",                  # 10
    "/clock",                  # 11    stutter
    "radiation_level.Green",   # 12
    "/rover/odom",             # 13    stutter
    "/clock",                  # 14    stutter
    "/rover/battery",          # 15    stutter
    "/rover/odom",             # 16    stutter
    "/clock",                  # 17    stutter
    "inspect.1",               # 18
    "move.1",                  # 19
    "radiation_level.Green",   # 20
    "/rover/odom",             # 21    stutter
    "/clock",                  # 22    stutter
    "/rover/battery",          # 23    stutter
    "/rover/odom",             # 24    stutter
    "inspect.3",               # 25
    "move.3",                  # 26
    "radiation_level.Green",   # 27
    "inspect.4",               # 28
    "radiation_level.Green",   # 29
    "move.4",                  # 30
)

# Fault positions over the observed trace (post-mapping, same indices).
FIRST_GREEN_INDEX = 5
SWAP_POSITION = 18       # exchanges inspect.1 and move.1
MISMATCH_POSITION = 26   # move.3 becomes move.<substitute>
MISMATCH_SUBSTITUTE = 1

RADIATION_FAULT = RadiationViolation()
SWAP_FAULT = SwapAdjacent(SWAP_POSITION)
MISMATCH_FAULT = ParamMismatch(MISMATCH_POSITION, MISMATCH_SUBSTITUTE)


def _padding_line(i: int) -> str:
    # All waypoints are inspected by index 30; the idle tail mixes
    # ambient Green readings with unmapped telemetry.
    if i % 7 == 3:
        return "radiation_level.Green"
    return STUTTER_NAMES[i % 3]


def build_pass_trace_lines() -> list:
    """The frozen 243-line passing trace, one raw line per event."""
    lines = list(_PREFIX)
    lines.extend(_padding_line(i) for i in range(len(_PREFIX), TRACE_LEN - 1))
    lines.append("mission_complete")
    assert len(lines) == TRACE_LEN
    return lines


def render_trace_file() -> str:
    header = ("# Rover mission log: raw names resolve through "
              "rover_mapping.json,\n"
              "# canonical names resolve as themselves, anything else is "
              "out of alphabet.\n")
    return header + "\n".join(build_pass_trace_lines()) + "\n"
