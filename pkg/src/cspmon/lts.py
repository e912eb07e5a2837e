"""Labelled transition systems: the oracle representation.

States are dense integer ids; each state stores its outgoing edges as a
tuple of (label, target) pairs.  A label is an Event, TAU (an internal
step, produced by hiding) or TICK (successful termination).  TICK never
appears in the alphabet and is never matched against observed events; a
terminal state simply offers nothing.

The operations here cover the oracle pipeline after synthesis: alphabet
enumeration, hiding, tau-closure determinization and the determinism
gate.  The determinism condition is the stable-refusal reading: after
some trace the process can both accept and refuse the same event, i.e.
a reachable macro-state has a tau-stable member refusing an event that
another member offers.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .errors import AlphabetError, DomainError, LimitExceeded, UnknownState
from .nodes import Spec
from .resolver import Symbols, build_symbols


@dataclass(frozen=True)
class Event:
    channel: str
    values: tuple = ()

    @property
    def text(self) -> str:
        return ".".join([self.channel] + [_value_text(v) for v in self.values])

    @property
    def sort_key(self) -> tuple:
        return (self.channel,) + tuple(
            (0, v) if isinstance(v, int) else (1, v) for v in self.values
        )

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"Event({self.text!r})"


def _value_text(value) -> str:
    if isinstance(value, frozenset):
        raise TypeError("set values cannot appear in events")
    return str(value)


class _InternalLabel:
    """TAU and TICK: singleton non-event labels."""

    __slots__ = ("name",)

    def __init__(self, name: str) -> None:
        self.name = name

    def __repr__(self) -> str:
        return self.name


TAU = _InternalLabel("Tau")
TICK = _InternalLabel("Tick")


def label_text(label) -> str:
    return label.name if isinstance(label, _InternalLabel) else label.text


def _label_sort_key(label) -> tuple:
    if isinstance(label, _InternalLabel):
        return (1, label.name)
    return (0,) + label.sort_key


@dataclass(frozen=True)
class SynthesisLimits:
    max_states: int = 1_000_000
    max_transitions: int = 10_000_000

    def __post_init__(self) -> None:
        if self.max_states <= 0 or self.max_transitions <= 0:
            raise ValueError("synthesis limits must be positive")


DEFAULT_LIMITS = SynthesisLimits()


@dataclass(frozen=True)
class Lts:
    """Explicit transition system; state ids are 0..n_states-1."""

    initial: int
    outgoing: tuple  # outgoing[s] = tuple of (label, target)
    alphabet: frozenset  # of Event

    @property
    def n_states(self) -> int:
        return len(self.outgoing)

    @property
    def states(self) -> range:
        return range(len(self.outgoing))

    def transitions(self):
        """Iterate (source, label, target) triples."""
        for src, edges in enumerate(self.outgoing):
            for label, dst in edges:
                yield src, label, dst

    @property
    def n_transitions(self) -> int:
        return sum(len(edges) for edges in self.outgoing)


@dataclass(frozen=True)
class Witness:
    trace: tuple  # of Event, shortest path to the ambiguous macro-state
    ambiguous: "Event"


@dataclass(frozen=True)
class DeterminismReport:
    deterministic: bool
    witness: Optional[Witness] = None

    def __post_init__(self) -> None:
        if self.deterministic == (self.witness is not None):
            raise ValueError("witness present iff not deterministic")


# --------------------------------------------------------------------------
# Alphabet
# --------------------------------------------------------------------------

def enumerate_alphabet(spec: Spec, syms: Symbols = None) -> frozenset:
    """Cartesian expansion of every declared channel over its domains."""
    if syms is None:
        syms = build_symbols(spec)
    events = set()
    for name, domains in syms.channels.items():
        for i, domain in enumerate(domains):
            if not domain:
                raise DomainError(
                    f"channel {name!r} parameter {i + 1} has an empty domain")
        for combo in itertools.product(*domains):
            events.add(Event(name, combo))
    return frozenset(events)


# --------------------------------------------------------------------------
# State queries
# --------------------------------------------------------------------------

def events_of(lts: Lts, s: int) -> set:
    """Visible events offered at state s."""
    if not 0 <= s < lts.n_states:
        raise UnknownState(f"state {s} outside 0..{lts.n_states - 1}")
    return {label for label, _ in lts.outgoing[s]
            if not isinstance(label, _InternalLabel)}


def successor(lts: Lts, s: int, event: Event):
    """Target of the event-labelled edge at s, or None."""
    for label, dst in lts.outgoing[s]:
        if label == event:
            return dst
    return None


# --------------------------------------------------------------------------
# Hiding
# --------------------------------------------------------------------------

def hide(lts: Lts, hidden) -> Lts:
    """Relabel transitions on hidden events to TAU; shrink the alphabet."""
    hidden = frozenset(hidden)
    if not hidden:
        return lts
    outside = hidden - lts.alphabet
    if outside:
        names = ", ".join(sorted(e.text for e in outside))
        raise AlphabetError(f"cannot hide events outside the alphabet: {names}")
    outgoing = tuple(
        tuple((TAU if label in hidden else label, dst) for label, dst in edges)
        for edges in lts.outgoing
    )
    return Lts(lts.initial, outgoing, lts.alphabet - hidden)


# --------------------------------------------------------------------------
# Subset construction
# --------------------------------------------------------------------------

def _tau_closure(lts: Lts, seed) -> frozenset:
    closure = set(seed)
    stack = list(seed)
    while stack:
        for label, dst in lts.outgoing[stack.pop()]:
            if label is TAU and dst not in closure:
                closure.add(dst)
                stack.append(dst)
    return frozenset(closure)


def is_deterministic_tau_free(lts: Lts) -> bool:
    """Tau-free with pairwise distinct labels per state.

    Such an LTS is its own subset construction, and is exactly what the
    monitor accepts as an oracle.
    """
    for edges in lts.outgoing:
        if len(edges) > 1:
            labels = set()
            for label, _ in edges:
                if label is TAU or label in labels:
                    return False
                labels.add(label)
        elif edges and edges[0][0] is TAU:
            return False
    return True


def _macro_successors(lts: Lts, members: frozenset) -> tuple:
    """Successor macro-states of one subset, keyed by label.

    Returns (event_succ, tick_succ): a dict Event -> frozenset in
    canonical label order, and the Tick successor or None.
    """
    by_label = {}
    tick_targets = set()
    for member in members:
        for label, dst in lts.outgoing[member]:
            if label is TAU:
                continue
            if label is TICK:
                tick_targets.add(dst)
            else:
                by_label.setdefault(label, set()).add(dst)
    event_succ = {
        label: _tau_closure(lts, targets)
        for label, targets in sorted(by_label.items(),
                                     key=lambda kv: kv[0].sort_key)
    }
    tick_succ = _tau_closure(lts, tick_targets) if tick_targets else None
    return event_succ, tick_succ


def determinize(lts: Lts, limits: SynthesisLimits = DEFAULT_LIMITS) -> Lts:
    """Tau-closure subset construction.

    The result has no TAU edges and pairwise distinct outgoing labels per
    state.  TICK acts as a marking: a macro-state containing a member that
    can terminate keeps a single TICK edge to the closure of the
    termination targets, and nothing else is derived from it.
    """
    if is_deterministic_tau_free(lts):
        return lts

    initial = _tau_closure(lts, {lts.initial})
    ids = {initial: 0}
    queue = deque([initial])
    outgoing = []
    n_transitions = 0

    def intern(members: frozenset) -> int:
        sid = ids.get(members)
        if sid is None:
            sid = len(ids)
            if sid + 1 > limits.max_states:
                raise LimitExceeded("states", sid + 1, limits.max_states)
            ids[members] = sid
            queue.append(members)
        return sid

    while queue:
        members = queue.popleft()
        event_succ, tick_succ = _macro_successors(lts, members)
        edges = [(label, intern(succ)) for label, succ in event_succ.items()]
        if tick_succ is not None:
            edges.append((TICK, intern(tick_succ)))
        n_transitions += len(edges)
        if n_transitions > limits.max_transitions:
            raise LimitExceeded("transitions", n_transitions,
                                limits.max_transitions)
        outgoing.append(tuple(edges))

    return Lts(0, tuple(outgoing), lts.alphabet)


def check_determinism(lts: Lts,
                      limits: SynthesisLimits = DEFAULT_LIMITS) -> DeterminismReport:
    """Stable-refusal determinism gate over the subset construction.

    Non-deterministic iff some reachable macro-state has a tau-stable
    member that refuses an event another member offers.  The witness
    carries a shortest trace to the first such macro-state in
    breadth-first order, plus one refused event.
    """
    if is_deterministic_tau_free(lts):
        return DeterminismReport(True)

    stable_cache = {}

    def is_stable(state: int) -> bool:
        cached = stable_cache.get(state)
        if cached is None:
            cached = all(label is not TAU for label, _ in lts.outgoing[state])
            stable_cache[state] = cached
        return cached

    def offered(state: int) -> set:
        return {label for label, _ in lts.outgoing[state]
                if not isinstance(label, _InternalLabel)}

    initial = _tau_closure(lts, {lts.initial})
    ids = {initial: 0}
    traces = {0: ()}
    queue = deque([(initial, 0)])
    n_transitions = 0

    while queue:
        members, sid = queue.popleft()
        macro_offer = set()
        for member in members:
            macro_offer |= offered(member)
        for member in members:
            if not is_stable(member):
                continue
            refused = macro_offer - offered(member)
            if refused:
                ambiguous = min(refused, key=lambda e: e.sort_key)
                return DeterminismReport(
                    False, Witness(traces[sid], ambiguous))

        event_succ, tick_succ = _macro_successors(lts, members)
        if tick_succ is not None:
            event_succ[TICK] = tick_succ
        for label, succ in event_succ.items():
            next_id = ids.get(succ)
            if next_id is None:
                next_id = len(ids)
                if next_id + 1 > limits.max_states:
                    raise LimitExceeded("states", next_id + 1, limits.max_states)
                ids[succ] = next_id
                traces[next_id] = (traces[sid] + (label,)
                                   if label is not TICK else traces[sid])
                queue.append((succ, next_id))
            n_transitions += 1
            if n_transitions > limits.max_transitions:
                raise LimitExceeded("transitions", n_transitions,
                                    limits.max_transitions)

    return DeterminismReport(True)


# --------------------------------------------------------------------------
# Text dump
# --------------------------------------------------------------------------

def dump_lts(lts: Lts) -> str:
    """Debug/golden-test dump: header plus one `src --label--> dst` per line."""
    lines = [
        f"initial: {lts.initial}",
        "alphabet: " + " ".join(
            e.text for e in sorted(lts.alphabet, key=lambda e: e.sort_key)),
    ]
    for src in lts.states:
        for label, dst in sorted(lts.outgoing[src],
                                 key=lambda edge: _label_sort_key(edge[0])):
            lines.append(f"{src} --{label_text(label)}--> {dst}")
    return "\n".join(lines) + "\n"
