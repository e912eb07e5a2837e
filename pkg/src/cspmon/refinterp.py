"""Brute-force trace-acceptance interpreter, used only by tests.

Where the production path synthesizes an explicit graph and walks it,
this module folds a trace directly over sets of interpreter states: a
state is a process expression plus its full accumulated environment,
nothing is memoized, and non-determinism is represented by the set
itself.  Agreement between the two is what the oracle-equivalence
property tests check, so this code keeps its own clause matcher and
event expansion rather than calling into the synthesizer's.

Exponential behaviour is acceptable here; it never runs in production.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import EvalError
from .lts import TICK, Event
from .nodes import (
    Call, Choice, DotItem, Guarded, InputItem, Prefix, RestrictedItem, Skip,
    Spec,
)
from .resolver import Symbols, build_symbols
from .semantics import eval_expr, state_key

STRICT = "strict"
PERMISSIVE = "permissive"


@dataclass(frozen=True)
class InterpState:
    proc: object  # ProcessExpr
    env: tuple  # full environment as sorted (name, value) pairs

    def environment(self) -> dict:
        return dict(self.env)


def make_state(proc, env: dict) -> InterpState:
    return InterpState(proc, tuple(sorted(env.items())))


def entry_state(syms: Symbols, name: str, args: tuple) -> InterpState:
    body, env = _match_call(syms, name, args)
    return make_state(body, env)


def _match_call(syms: Symbols, name: str, args: tuple):
    pdef = syms.processes.get(name)
    if pdef is None:
        raise EvalError(f"unknown process {name!r}")
    if len(args) != pdef.arity:
        raise EvalError(f"process {name!r} takes {pdef.arity} arguments, "
                        f"got {len(args)}")
    for clause in pdef.clauses:
        env = {}
        if all(_pattern_matches(p, v, env, syms)
               for p, v in zip(clause.patterns, args)):
            return clause.body, env
    raise EvalError(f"no clause of process {name!r} matches {args!r}")


def _pattern_matches(pat, value, env: dict, syms: Symbols) -> bool:
    kind = type(pat).__name__
    if kind == "PatWild":
        return True
    if kind == "PatInt":
        return isinstance(value, int) and value == pat.value
    if kind == "PatName":
        if pat.ident in syms.ctor_index:
            return value == pat.ident
        env[pat.ident] = value
        return True
    if kind == "PatEmptySet":
        return value == frozenset()
    return False


def _expand_event(event_expr, env: dict, syms: Symbols) -> list:
    """(Event, environment-after-binding) for every concrete instantiation."""
    domains = syms.channels[event_expr.channel]
    results = []

    def walk(index: int, values: tuple, env_now: dict) -> None:
        if index == len(event_expr.items):
            results.append((Event(event_expr.channel, values), env_now))
            return
        item = event_expr.items[index]
        domain = domains[index]
        if isinstance(item, DotItem):
            value = eval_expr(item.expr, env_now, syms)
            if value not in domain:
                raise EvalError(
                    f"value {value!r} outside the domain of channel "
                    f"{event_expr.channel!r} parameter {index + 1}")
            walk(index + 1, values + (value,), env_now)
        elif isinstance(item, InputItem):
            if item.var in syms.ctor_index:
                if item.var not in domain:
                    raise EvalError(
                        f"value {item.var!r} outside the domain of channel "
                        f"{event_expr.channel!r} parameter {index + 1}")
                walk(index + 1, values + (item.var,), env_now)
            else:
                for value in domain:
                    walk(index + 1, values + (value,),
                         {**env_now, item.var: value})
        else:
            allowed = eval_expr(item.domain, env_now, syms)
            if not isinstance(allowed, frozenset):
                raise EvalError(
                    f"restriction on {event_expr.channel!r} is not a set")
            if allowed - set(domain):
                raise EvalError(
                    f"restriction on channel {event_expr.channel!r} includes "
                    f"values outside its domain")
            for value in domain:
                if value in allowed:
                    walk(index + 1, values + (value,),
                         {**env_now, item.var: value})

    walk(0, (), env)
    return results


def _guard_value(cond, env: dict, syms: Symbols) -> bool:
    value = eval_expr(cond, env, syms)
    if not isinstance(value, bool):
        raise EvalError(f"guard did not evaluate to a boolean: {value!r}")
    return value


def initials(state: InterpState, syms: Symbols) -> set:
    """Events the state immediately offers."""
    return _initials(state.proc, state.environment(), syms, frozenset())


def _initials(proc, env: dict, syms: Symbols, visiting: frozenset) -> set:
    if isinstance(proc, Skip):
        return set()
    if isinstance(proc, Prefix):
        return {event for event, _ in _expand_event(proc.event, env, syms)}
    if isinstance(proc, Guarded):
        if _guard_value(proc.cond, env, syms):
            return _initials(proc.body, env, syms, visiting)
        return set()
    if isinstance(proc, Choice):
        out = set()
        for branch in proc.branches:
            out |= _initials(branch, env, syms, visiting)
        return out
    if isinstance(proc, Call):
        args = tuple(eval_expr(a, env, syms) for a in proc.args)
        if (proc.name, args) in visiting:
            return set()
        body, call_env = _match_call(syms, proc.name, args)
        return _initials(body, call_env, syms, visiting | {(proc.name, args)})
    raise EvalError(f"cannot interpret {proc!r}")


def after(state: InterpState, event: Event, syms: Symbols) -> set:
    """All successor states reachable by performing ``event``."""
    return _after(state.proc, state.environment(), event, syms, frozenset())


def _after(proc, env: dict, event: Event, syms: Symbols,
           visiting: frozenset) -> set:
    if isinstance(proc, Skip):
        return set()
    if isinstance(proc, Prefix):
        out = set()
        for candidate, bound_env in _expand_event(proc.event, env, syms):
            if candidate == event:
                out.add(make_state(proc.cont, bound_env))
        return out
    if isinstance(proc, Guarded):
        if _guard_value(proc.cond, env, syms):
            return _after(proc.body, env, event, syms, visiting)
        return set()
    if isinstance(proc, Choice):
        out = set()
        for branch in proc.branches:
            out |= _after(branch, env, event, syms, visiting)
        return out
    if isinstance(proc, Call):
        args = tuple(eval_expr(a, env, syms) for a in proc.args)
        if (proc.name, args) in visiting:
            return set()
        body, call_env = _match_call(syms, proc.name, args)
        return _after(body, call_env, event, syms, visiting | {(proc.name, args)})
    raise EvalError(f"cannot interpret {proc!r}")


def can_terminate(state: InterpState, syms: Symbols) -> bool:
    return _can_terminate(state.proc, state.environment(), syms, frozenset())


def _can_terminate(proc, env: dict, syms: Symbols, visiting: frozenset) -> bool:
    if isinstance(proc, Skip):
        return True
    if isinstance(proc, Prefix):
        return False
    if isinstance(proc, Guarded):
        return (_guard_value(proc.cond, env, syms)
                and _can_terminate(proc.body, env, syms, visiting))
    if isinstance(proc, Choice):
        return any(_can_terminate(b, env, syms, visiting) for b in proc.branches)
    if isinstance(proc, Call):
        args = tuple(eval_expr(a, env, syms) for a in proc.args)
        if (proc.name, args) in visiting:
            return False
        body, call_env = _match_call(syms, proc.name, args)
        return _can_terminate(body, call_env, syms, visiting | {(proc.name, args)})
    raise EvalError(f"cannot interpret {proc!r}")


# --------------------------------------------------------------------------
# Trace acceptance
# --------------------------------------------------------------------------

def in_alphabet(event: Event, syms: Symbols) -> bool:
    domains = syms.channels.get(event.channel)
    if domains is None or len(domains) != len(event.values):
        return False
    return all(value in domain
               for value, domain in zip(event.values, domains))


def saturate(states: set, hidden, syms: Symbols) -> set:
    """Close a state-set under performing hidden events."""
    closed = set(states)
    frontier = list(states)
    while frontier:
        state = frontier.pop()
        for event in hidden:
            for successor in after(state, event, syms):
                if successor not in closed:
                    closed.add(successor)
                    frontier.append(successor)
    return closed


def accepts(spec: Spec, entry: tuple, mode: str, observable, trace) -> bool:
    """Fold a trace over state-sets; True means the trace passes.

    ``entry`` is (process name, argument values); ``observable`` is the
    visible event set, and everything else in the alphabet is treated as
    hidden and saturated between steps.
    """
    syms = build_symbols(spec)
    alphabet = set()
    for name, domains in syms.channels.items():
        for combo in itertools.product(*domains):
            alphabet.add(Event(name, combo))
    hidden = alphabet - set(observable)

    states = saturate({entry_state(syms, entry[0], tuple(entry[1]))},
                       hidden, syms)
    for event in trace:
        if not in_alphabet(event, syms) or event in hidden:
            # Outside the visible alphabet (foreign, or hidden from view):
            # a strict monitor rejects, a permissive one ignores.
            if mode == STRICT:
                return False
            continue
        successors = set()
        for state in states:
            successors |= after(state, event, syms)
        if not successors:
            return False
        states = saturate(successors, hidden, syms)
    return True


# --------------------------------------------------------------------------
# Reachability walk (state/transition count oracle for synthesis tests)
# --------------------------------------------------------------------------

def reachable_graph(spec: Spec, entry: tuple, syms: Symbols = None):
    """Exhaustively unfold the spec from the entry call.

    Returns (n_states, n_transitions) where states are keyed by the same
    canonical closed form the synthesizer memoizes on, but every
    transition is derived independently through ``after``.  Termination
    is counted like the synthesizer counts it: a terminating state gets
    one TICK edge to a shared terminal state.
    """
    if syms is None:
        syms = build_symbols(spec)
    alphabet = sorted(
        (Event(name, combo)
         for name, domains in syms.channels.items()
         for combo in itertools.product(*domains)),
        key=lambda e: e.sort_key)

    start = entry_state(syms, entry[0], tuple(entry[1]))
    start_key = ("call", entry[0], tuple(entry[1]))
    seen = {start_key}
    frontier = [(start_key, start)]
    n_transitions = 0
    any_tick = False

    while frontier:
        key, state = frontier.pop()
        edges = set()
        for event in alphabet:
            for successor in after(state, event, syms):
                succ_key = state_key(successor.proc, successor.environment(),
                                     syms)
                edges.add((event, succ_key))
                if succ_key not in seen:
                    seen.add(succ_key)
                    frontier.append((succ_key, successor))
        if can_terminate(state, syms):
            edges.add((TICK, ("omega",)))
            any_tick = True
        n_transitions += len(edges)

    if any_tick:
        seen.add(("omega",))
    return len(seen), n_transitions
