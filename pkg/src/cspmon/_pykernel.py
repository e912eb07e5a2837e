"""Pure-Python batch event walk; fallback twin of the compiled kernel.

Both implementations share one contract: walk ``ids`` through ``table``
from ``start``; an id < 0 means the event is outside the alphabet
(fail in strict mode, skip in permissive); a table cell < 0 means the
event is not offered (fail in both modes).  On failure the pre-failure
state and the failing position are returned; on success the final
state and -1.
"""

from __future__ import annotations


def run_events(table, ids, start: int, strict: bool):
    state = start
    if strict:
        for pos in range(len(ids)):
            event = ids[pos]
            if event < 0:
                return int(state), pos
            target = table[state, event]
            if target < 0:
                return int(state), pos
            state = target
    else:
        for pos in range(len(ids)):
            event = ids[pos]
            if event < 0:
                continue
            target = table[state, event]
            if target < 0:
                return int(state), pos
            state = target
    return int(state), -1
