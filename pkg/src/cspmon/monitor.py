"""Runtime-verification core: sessions, next-state semantics, verdicts.

Two next-state semantics over a deterministic tau-free oracle:

  strict      e outside Alpha(M)            -> Error
              e in Alpha(M), not offered    -> Error
              e offered at s                -> s'

  permissive  e outside Alpha(M)            -> s (stutter)
              e in Alpha(M), not offered    -> Error
              e offered at s                -> s'

Raw names with no mapping count as outside the alphabet.  Error is
absorbing: a failed session keeps returning its original Fail verdict.

``next_strict`` and ``next_permissive`` are the reference semantics,
written directly off the definitions above.  Sessions and check_trace
run the same semantics through a dense state x event transition table
(and, for whole traces, a batch kernel), which unit tests hold equal to
the reference functions.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import NondeterministicOracle
from .kernel import run_events
from .lts import Event, Lts, events_of, is_deterministic_tau_free, successor


class Mode(enum.Enum):
    STRICT = "strict"
    PERMISSIVE = "permissive"


class FailReason(enum.Enum):
    NOT_IN_ALPHABET = "NotInAlphabet"
    NOT_AVAILABLE_HERE = "NotAvailableHere"


class _Error:
    __slots__ = ()

    def __repr__(self) -> str:
        return "Error"


ERROR = _Error()


@dataclass(frozen=True)
class Unmapped:
    """A raw SUA name that could not be mapped to a model event."""

    raw: str

    def __str__(self) -> str:
        return self.raw


Observed = Union[Event, Unmapped, str]


def observed_text(item: Observed) -> str:
    if isinstance(item, Event):
        return item.text
    if isinstance(item, Unmapped):
        return item.raw
    return str(item)


@dataclass(frozen=True)
class Counterexample:
    failing_trace: tuple  # every item as received, failing event last
    acceptable: frozenset  # events_of at the pre-failure state
    reason: FailReason

    def acceptable_texts(self) -> list:
        """Acceptable events as text, in canonical order."""
        return [e.text for e in sorted(self.acceptable,
                                       key=lambda e: e.sort_key)]


@dataclass(frozen=True)
class PassSoFar:
    current: int


@dataclass(frozen=True)
class Fail:
    failing_event: Observed
    counterexample: Counterexample


Verdict = Union[PassSoFar, Fail]


# --------------------------------------------------------------------------
# Reference next-state functions (pure, table-free)
# --------------------------------------------------------------------------

def next_strict(oracle: Lts, s: int, e: Observed):
    """Definition of the strict step; returns a StateId or ERROR."""
    if not isinstance(e, Event) or e not in oracle.alphabet:
        return ERROR
    target = successor(oracle, s, e)
    return ERROR if target is None else target


def next_permissive(oracle: Lts, s: int, e: Observed):
    """Definition of the permissive step; returns a StateId or ERROR."""
    if not isinstance(e, Event) or e not in oracle.alphabet:
        return s
    target = successor(oracle, s, e)
    return ERROR if target is None else target


# --------------------------------------------------------------------------
# Transition table
# --------------------------------------------------------------------------

class OracleIndex:
    """Dense transition table over an oracle.

    Rows are states, columns are alphabet events in canonical order;
    cell value is the target state or -1.  Built once per oracle and
    shared by all sessions.
    """

    def __init__(self, oracle: Lts) -> None:
        require_monitorable(oracle)
        self.oracle = oracle
        self.events = sorted(oracle.alphabet, key=lambda e: e.sort_key)
        self.column = {event: i for i, event in enumerate(self.events)}
        table = np.full((oracle.n_states, max(len(self.events), 1)), -1,
                        dtype=np.int32)
        for src, edges in enumerate(oracle.outgoing):
            for label, dst in edges:
                if isinstance(label, Event):
                    table[src, self.column[label]] = dst
        self.table = table

    def column_of(self, item: Observed) -> int:
        """Column id of an observed item; -1 when outside the alphabet."""
        if isinstance(item, Event):
            return self.column.get(item, -1)
        return -1


def require_monitorable(oracle: Lts) -> None:
    if not is_deterministic_tau_free(oracle):
        raise NondeterministicOracle(
            "monitor oracle must be deterministic and Tau-free; "
            "run the determinism gate and determinize first")


# --------------------------------------------------------------------------
# Sessions
# --------------------------------------------------------------------------

@dataclass
class Session:
    oracle: Lts
    mode: Mode
    index: OracleIndex
    current: object = 0  # StateId or ERROR
    trace: list = field(default_factory=list)
    steps_checked: int = 0
    verdict: Verdict = None

    def step(self, e: Observed) -> Verdict:
        return step(self, e)


def new_session(oracle: Lts, mode: Mode, index: OracleIndex = None) -> Session:
    """Fresh session at the oracle's initial state."""
    if index is None:
        index = OracleIndex(oracle)
    else:
        require_monitorable(oracle)
    return Session(oracle=oracle, mode=mode, index=index,
                   current=oracle.initial, verdict=PassSoFar(oracle.initial))


def step(session: Session, e: Observed) -> Verdict:
    """Advance one observed event; all outcomes are verdicts."""
    session.trace.append(e)
    if session.current is ERROR:
        return session.verdict

    session.steps_checked += 1
    state = session.current
    col = session.index.column_of(e)

    if col < 0:
        if session.mode is Mode.STRICT:
            return _fail(session, e, state, FailReason.NOT_IN_ALPHABET)
        session.verdict = PassSoFar(state)
        return session.verdict

    target = int(session.index.table[state, col])
    if target < 0:
        return _fail(session, e, state, FailReason.NOT_AVAILABLE_HERE)
    session.current = target
    session.verdict = PassSoFar(target)
    return session.verdict


def _fail(session: Session, e: Observed, pre_state: int,
          reason: FailReason) -> Verdict:
    counterexample = Counterexample(
        failing_trace=tuple(session.trace),
        acceptable=frozenset(events_of(session.oracle, pre_state)),
        reason=reason,
    )
    session.current = ERROR
    session.verdict = Fail(e, counterexample)
    return session.verdict


# --------------------------------------------------------------------------
# Whole-trace checking
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckStats:
    total_events: int
    events_checked: int
    check_s: float
    mean_event_s: float


_CHUNK = 4096


def check_trace(oracle: Lts, mode: Mode, trace, index: OracleIndex = None,
                chunk_size: int = _CHUNK):
    """Fold the trace, stopping at the first Fail.

    Returns (final Verdict, CheckStats).  ``trace`` may be any iterable
    of events / unmapped names; it is consumed in chunks through the
    batch kernel.  Timing covers the next-state work only, not mapping
    or IO.  After a failure the rest of the stream is drained so that
    total_events still reports the full trace length.
    """
    if index is None:
        index = OracleIndex(oracle)
    strict = mode is Mode.STRICT

    state = oracle.initial
    received = []
    total_events = 0
    events_checked = 0
    check_s = 0.0
    verdict = PassSoFar(state)
    failed = False

    iterator = iter(trace)
    while True:
        buffer = []
        for item in iterator:
            buffer.append(item)
            if len(buffer) >= chunk_size:
                break
        if not buffer:
            break
        total_events += len(buffer)
        if failed:
            continue
        received.extend(buffer)

        column_of = index.column_of
        ids = np.fromiter((column_of(item) for item in buffer),
                          dtype=np.int32, count=len(buffer))
        start = time.perf_counter()
        state, fail_pos = run_events(index.table, ids, state, strict)
        check_s += time.perf_counter() - start

        if fail_pos < 0:
            events_checked += len(buffer)
            verdict = PassSoFar(state)
        else:
            events_checked += fail_pos + 1
            failing = buffer[fail_pos]
            del received[len(received) - (len(buffer) - fail_pos - 1):]
            reason = (FailReason.NOT_IN_ALPHABET if ids[fail_pos] < 0
                      else FailReason.NOT_AVAILABLE_HERE)
            verdict = Fail(failing, Counterexample(
                failing_trace=tuple(received),
                acceptable=frozenset(events_of(oracle, state)),
                reason=reason,
            ))
            failed = True

    mean = check_s / events_checked if events_checked else 0.0
    return verdict, CheckStats(total_events, events_checked, check_s, mean)
