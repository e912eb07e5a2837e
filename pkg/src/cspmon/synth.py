"""Oracle synthesis: breadth-first expansion of the process semantics.

Starting from an entry call, every reachable canonical state is
assigned a dense integer id in discovery order, its initial transitions
are materialized, and the result is packaged as an Lts whose alphabet
is the full channel enumeration.  State and transition counts are
checked against SynthesisLimits as the graph grows, so runaway models
fail fast instead of exhausting memory.
"""

from __future__ import annotations

from collections import deque

from .errors import EvalError, LimitExceeded
from .lts import DEFAULT_LIMITS, Event, Lts, SynthesisLimits, enumerate_alphabet
from .nodes import Spec
from .resolver import Symbols, build_symbols
from .semantics import InitialsEngine


def synthesize_lts(spec: Spec,
                   entry_name: str,
                   entry_args: tuple = (),
                   limits: SynthesisLimits = DEFAULT_LIMITS,
                   syms: Symbols = None) -> Lts:
    """Build the explicit LTS of ``entry_name(entry_args)``."""
    if syms is None:
        syms = build_symbols(spec)
    alphabet = enumerate_alphabet(spec, syms)

    pdef = syms.processes.get(entry_name)
    if pdef is None:
        raise EvalError(f"unknown entry process {entry_name!r}")
    if len(entry_args) != pdef.arity:
        raise EvalError(f"entry process {entry_name!r} takes {pdef.arity} "
                        f"arguments, got {len(entry_args)}")

    engine = InitialsEngine(syms)
    entry_key = ("call", entry_name, tuple(entry_args))
    ids = {entry_key: 0}
    queue = deque((entry_key,))
    outgoing = []
    n_transitions = 0

    while queue:
        key = queue.popleft()
        edges = []
        for label, target_key in engine.of_key(key):
            target_id = ids.get(target_key)
            if target_id is None:
                target_id = len(ids)
                if target_id + 1 > limits.max_states:
                    raise LimitExceeded("states", target_id + 1,
                                        limits.max_states)
                ids[target_key] = target_id
                queue.append(target_key)
            edges.append((label, target_id))
        n_transitions += len(edges)
        if n_transitions > limits.max_transitions:
            raise LimitExceeded("transitions", n_transitions,
                                limits.max_transitions)
        outgoing.append(tuple(edges))

    return Lts(0, tuple(outgoing), alphabet)
