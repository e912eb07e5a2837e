import random

import pytest

from cspmon.errors import NondeterministicOracle
from cspmon.lts import Event, events_of, hide
from cspmon.monitor import (ERROR, Fail, FailReason, Mode, OracleIndex,
                            PassSoFar, Unmapped, check_trace, new_session,
                            next_permissive, next_strict, observed_text, step)
from cspmon.parser import parse_spec
from cspmon.resolver import validate_spec
from cspmon.synth import synthesize_lts
from cspmon.traceio import parse_event_text


@pytest.fixture
def ev(rover_oracle):
    def build(*texts):
        out = []
        for text in texts:
            event = parse_event_text(text, rover_oracle.alphabet)
            out.append(event if event is not None else Event(text))
        return out
    return build


def _walk(oracle, index, trace):
    session = new_session(oracle, Mode.PERMISSIVE, index)
    for event in trace:
        verdict = step(session, event)
        assert isinstance(verdict, PassSoFar), event
    return session.current


def test_observed_text_variants():
    assert observed_text(Event("move", (2,))) == "move.2"
    assert observed_text(Unmapped("/rover/odom")) == "/rover/odom"
    assert observed_text("battery_low") == "battery_low"


def test_new_session_starts_at_initial(rover_oracle, rover_index):
    session = new_session(rover_oracle, Mode.PERMISSIVE, rover_index)
    assert session.current == rover_oracle.initial
    assert session.trace == []
    assert events_of(rover_oracle, session.current) == {Event("mission_start")}


def test_new_session_rejects_tau_oracle(rover_oracle):
    hidden = frozenset(e for e in rover_oracle.alphabet
                       if e.channel == "inspect")
    with pytest.raises(NondeterministicOracle):
        new_session(hide(rover_oracle, hidden), Mode.STRICT)


def test_oracle_index_rejects_nondeterministic_oracle():
    spec = validate_spec(parse_spec(
        "channel a\nchannel b\nchannel c\n"
        "P = a -> b -> SKIP [] a -> c -> SKIP"))
    with pytest.raises(NondeterministicOracle):
        OracleIndex(synthesize_lts(spec, "P"))


def test_next_strict_foreign_event_is_error(rover_oracle):
    assert next_strict(rover_oracle, rover_oracle.initial,
                       Event("battery_low")) is ERROR
    assert next_strict(rover_oracle, rover_oracle.initial,
                       Unmapped("/rover/odom")) is ERROR


def test_next_strict_unavailable_event_is_error(rover_oracle, ev):
    # move.2 is in the alphabet but not offered at the initial state
    move_2, = ev("move.2")
    assert move_2 in rover_oracle.alphabet
    assert next_strict(rover_oracle, rover_oracle.initial, move_2) is ERROR


def test_next_strict_follows_unique_transition(rover_oracle):
    after_start = next_strict(rover_oracle, rover_oracle.initial,
                              Event("mission_start"))
    assert after_start is not ERROR
    offered = {e.text for e in events_of(rover_oracle, after_start)}
    assert offered == {"inspect.0", "inspect.1", "inspect.2", "inspect.3",
                       "inspect.4", "move.0", "radiation_level.Green",
                       "radiation_level.Orange", "radiation_level.Red"}


def test_next_permissive_foreign_event_stutters(rover_oracle):
    s = rover_oracle.initial
    assert next_permissive(rover_oracle, s, Event("battery_low")) == s
    assert next_permissive(rover_oracle, s, Unmapped("/clock")) == s


def test_next_permissive_unavailable_event_is_error(rover_oracle, ev):
    move_2, = ev("move.2")
    assert next_permissive(rover_oracle, rover_oracle.initial,
                           move_2) is ERROR


def test_next_permissive_red_blocks_move(rover_oracle, rover_index, ev):
    s = _walk(rover_oracle, rover_index,
              ev("mission_start", "inspect.2", "radiation_level.Red"))
    move_2, = ev("move.2")
    assert next_permissive(rover_oracle, s, move_2) is ERROR
    assert {e.text for e in events_of(rover_oracle, s)} == {"move.0"}


def test_step_appends_and_advances(rover_oracle, rover_index):
    session = new_session(rover_oracle, Mode.STRICT, rover_index)
    verdict = step(session, Event("mission_start"))
    assert isinstance(verdict, PassSoFar)
    assert session.trace == [Event("mission_start")]
    assert session.steps_checked == 1


def test_step_strict_foreign_event_fails(rover_oracle, rover_index):
    session = new_session(rover_oracle, Mode.STRICT, rover_index)
    verdict = step(session, Unmapped("battery_low"))
    assert isinstance(verdict, Fail)
    assert verdict.counterexample.reason is FailReason.NOT_IN_ALPHABET
    assert verdict.failing_event == Unmapped("battery_low")


def test_step_permissive_foreign_event_passes(rover_oracle, rover_index):
    session = new_session(rover_oracle, Mode.PERMISSIVE, rover_index)
    verdict = step(session, Unmapped("battery_low"))
    assert verdict == PassSoFar(rover_oracle.initial)
    assert session.trace == [Unmapped("battery_low")]


def test_check_trace_waypoint_round_trip_passes(rover_oracle, rover_index,
                                                ev):
    trace = ev("mission_start", "inspect.2", "radiation_level.Green",
               "move.2")
    verdict, stats = check_trace(rover_oracle, Mode.PERMISSIVE, trace,
                                 rover_index)
    assert isinstance(verdict, PassSoFar)
    assert stats.events_checked == 4
    assert stats.total_events == 4


def test_check_trace_red_radiation_fails_at_move(rover_oracle, rover_index,
                                                 ev):
    trace = ev("mission_start", "inspect.2", "radiation_level.Red", "move.2")
    verdict, stats = check_trace(rover_oracle, Mode.PERMISSIVE, trace,
                                 rover_index)
    assert isinstance(verdict, Fail)
    assert verdict.failing_event.text == "move.2"
    assert verdict.counterexample.reason is FailReason.NOT_AVAILABLE_HERE
    assert verdict.counterexample.acceptable_texts() == ["move.0"]
    assert stats.events_checked == 4


def test_check_trace_empty_trace(rover_oracle, rover_index):
    verdict, stats = check_trace(rover_oracle, Mode.STRICT, [], rover_index)
    assert verdict == PassSoFar(rover_oracle.initial)
    assert stats.total_events == 0
    assert stats.events_checked == 0
    assert stats.check_s >= 0.0
    assert stats.mean_event_s == 0.0


def test_check_trace_counts_events_after_failure(rover_oracle, rover_index,
                                                 ev):
    trace = ev("mission_start", "move.2", "mission_start", "mission_start")
    verdict, stats = check_trace(rover_oracle, Mode.STRICT, trace,
                                 rover_index)
    assert isinstance(verdict, Fail)
    assert stats.events_checked == 2
    assert stats.total_events == 4
    assert verdict.counterexample.failing_trace == tuple(trace[:2])


def test_check_trace_chunking_is_invisible(rover_oracle, rover_index,
                                           rover_observed):
    for chunk in (1, 3, 7, 1000):
        verdict, stats = check_trace(rover_oracle, Mode.PERMISSIVE,
                                     rover_observed, rover_index,
                                     chunk_size=chunk)
        assert isinstance(verdict, PassSoFar)
        assert stats.events_checked == len(rover_observed)


def test_check_trace_failure_at_chunk_boundary(rover_oracle, rover_index,
                                               ev):
    trace = ev("mission_start", "inspect.2", "radiation_level.Red", "move.2")
    for chunk in (1, 2, 3, 4):
        verdict, stats = check_trace(rover_oracle, Mode.PERMISSIVE, trace,
                                     rover_index, chunk_size=chunk)
        assert isinstance(verdict, Fail)
        assert verdict.counterexample.acceptable_texts() == ["move.0"]
        assert stats.events_checked == 4


def test_failure_is_absorbing(rover_oracle, rover_index, ev):
    session = new_session(rover_oracle, Mode.STRICT, rover_index)
    step(session, Event("mission_start"))
    move_2, = ev("move.2")
    first = step(session, move_2)
    assert isinstance(first, Fail)
    for event in ev("mission_start", "inspect.0", "battery_low"):
        later = step(session, event)
        assert later is first
        assert later.counterexample.failing_trace == \
            first.counterexample.failing_trace
    assert session.current is ERROR
    assert len(session.trace) == 5
    assert session.steps_checked == 2


def test_step_agrees_with_check_trace(rover_oracle, rover_index):
    rng = random.Random(11)
    pool = sorted(rover_oracle.alphabet, key=lambda e: e.text)
    pool.append(Unmapped("battery_low"))
    for mode in (Mode.STRICT, Mode.PERMISSIVE):
        for _ in range(50):
            trace = [rng.choice(pool) for _ in range(rng.randrange(12))]
            session = new_session(rover_oracle, mode, rover_index)
            stepped = PassSoFar(rover_oracle.initial)
            for event in trace:
                stepped = step(session, event)
                if isinstance(stepped, Fail):
                    break
            folded, _ = check_trace(rover_oracle, mode, trace, rover_index)
            assert stepped == folded


def _fail_index(oracle, mode, trace, index):
    verdict, stats = check_trace(oracle, mode, trace, index)
    return stats.events_checked if isinstance(verdict, Fail) else None


def test_mode_dominance(rover_oracle, rover_index):
    rng = random.Random(7)
    pool = sorted(rover_oracle.alphabet, key=lambda e: e.text)
    pool.append(Event("battery_low"))
    pool.append(Unmapped("/rover/odom"))
    for _ in range(100):
        trace = [rng.choice(pool) for _ in range(rng.randrange(1, 15))]
        strict = _fail_index(rover_oracle, Mode.STRICT, trace, rover_index)
        permissive = _fail_index(rover_oracle, Mode.PERMISSIVE, trace,
                                 rover_index)
        if permissive is not None:
            assert strict is not None
            assert strict <= permissive


def test_permissive_stutter_filter_invariance(rover_oracle, rover_index):
    rng = random.Random(13)
    pool = sorted(rover_oracle.alphabet, key=lambda e: e.text)
    noise = [Unmapped("/rover/odom"), Unmapped("/clock"),
             Event("battery_low")]
    for _ in range(50):
        core = [rng.choice(pool) for _ in range(rng.randrange(10))]
        noisy = []
        for event in core:
            while rng.random() < 0.4:
                noisy.append(rng.choice(noise))
            noisy.append(event)
        clean_verdict, _ = check_trace(rover_oracle, Mode.PERMISSIVE, core,
                                       rover_index)
        noisy_verdict, _ = check_trace(rover_oracle, Mode.PERMISSIVE, noisy,
                                       rover_index)
        if isinstance(clean_verdict, PassSoFar):
            assert noisy_verdict == clean_verdict
        else:
            assert isinstance(noisy_verdict, Fail)
            assert noisy_verdict.failing_event == clean_verdict.failing_event
            assert (noisy_verdict.counterexample.acceptable ==
                    clean_verdict.counterexample.acceptable)


def test_verdicts_are_reproducible(rover_oracle, rover_index, ev):
    trace = ev("mission_start", "inspect.2", "radiation_level.Red", "move.2")
    first, _ = check_trace(rover_oracle, Mode.PERMISSIVE, trace, rover_index)
    second, _ = check_trace(rover_oracle, Mode.PERMISSIVE, trace, rover_index)
    assert first == second
    assert first.counterexample == second.counterexample


def test_counterexample_soundness(rover_oracle, rover_index, ev):
    trace = ev("mission_start", "inspect.2", "radiation_level.Red", "move.2")
    verdict, _ = check_trace(rover_oracle, Mode.PERMISSIVE, trace,
                             rover_index)
    failing = verdict.counterexample.failing_trace
    assert failing[-1] == verdict.failing_event
    prefix_verdict, _ = check_trace(rover_oracle, Mode.PERMISSIVE,
                                    failing[:-1], rover_index)
    assert isinstance(prefix_verdict, PassSoFar)
    assert (verdict.counterexample.acceptable ==
            events_of(rover_oracle, prefix_verdict.current))


def test_stuttered_events_recorded_in_failing_trace(rover_oracle,
                                                    rover_index, ev):
    start, inspect_2, red, move_2 = ev("mission_start", "inspect.2",
                                       "radiation_level.Red", "move.2")
    trace = [start, Unmapped("/rover/odom"), inspect_2, red, move_2]
    verdict, _ = check_trace(rover_oracle, Mode.PERMISSIVE, trace,
                             rover_index)
    assert isinstance(verdict, Fail)
    assert verdict.counterexample.failing_trace == tuple(trace)


def test_terminal_state_fails_with_empty_acceptable(rover_once_spec):
    oracle = synthesize_lts(rover_once_spec, "MAIN")
    index = OracleIndex(oracle)
    texts = ("mission_start", "move.0",
             "inspect.1", "move.1", "inspect.2", "move.2",
             "inspect.3", "move.3", "inspect.4", "move.4",
             "mission_complete", "mission_start")
    mission = [parse_event_text(t, oracle.alphabet) for t in texts]
    assert None not in mission
    verdict, stats = check_trace(oracle, Mode.STRICT, mission, index)
    assert isinstance(verdict, Fail)
    assert verdict.failing_event == Event("mission_start")
    assert verdict.counterexample.reason is FailReason.NOT_AVAILABLE_HERE
    assert verdict.counterexample.acceptable == frozenset()
    assert stats.events_checked == 12
