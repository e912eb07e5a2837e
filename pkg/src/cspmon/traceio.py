"""Event-name mapping and trace-file ingestion.

Observed events arrive as raw text.  Resolution order: a mapping entry
wins, then the text is tried as canonical event syntax (``chan`` or
``chan.v1.v2``), and anything left over becomes an Unmapped value whose
fate the monitoring mode decides.  Nothing is dropped silently.
"""

from __future__ import annotations

import json

from .errors import MappingError
from .lts import Event
from .monitor import Unmapped


def parse_event_text(text: str, alphabet) -> Event:
    """Parse canonical event text against an alphabet; None if not in it.

    Dot-separated values are read as integers when they look like one,
    otherwise as constructor names, which matches how alphabets are
    built from declared domains.
    """
    parts = text.split(".")
    channel = parts[0]
    values = []
    for part in parts[1:]:
        try:
            values.append(int(part))
        except ValueError:
            values.append(part)
    event = Event(channel, tuple(values))
    return event if event in alphabet else None


class Mapping:
    """Finite map from raw SUA event text to canonical events."""

    def __init__(self, entries: dict, alphabet) -> None:
        self.alphabet = frozenset(alphabet)
        self.entries = {}
        for raw, canonical in entries.items():
            event = parse_event_text(canonical, self.alphabet)
            if event is None:
                raise MappingError(
                    f"mapping value {canonical!r} (for key {raw!r}) is not "
                    f"an event of the model alphabet")
            self.entries[raw] = event

    def __len__(self) -> int:
        return len(self.entries)


def _reject_duplicate_keys(pairs):
    merged = {}
    for key, value in pairs:
        if key in merged:
            raise MappingError(f"duplicate mapping key {key!r}")
        merged[key] = value
    return merged


def load_mapping(path, alphabet) -> Mapping:
    """Read a JSON object of raw-name -> canonical-event-text."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle, object_pairs_hook=_reject_duplicate_keys)
        except json.JSONDecodeError as exc:
            raise MappingError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MappingError(f"{path}: mapping must be a JSON object")
    for key, value in data.items():
        if not isinstance(key, str) or not isinstance(value, str):
            raise MappingError(f"{path}: mapping entries must be "
                               f"string -> string")
    return Mapping(data, alphabet)


def empty_mapping(alphabet) -> Mapping:
    return Mapping({}, alphabet)


def map_event(mapping: Mapping, raw: str):
    """Resolve one raw name to an Event, or Unmapped when impossible."""
    event = mapping.entries.get(raw)
    if event is not None:
        return event
    event = parse_event_text(raw, mapping.alphabet)
    if event is not None:
        return event
    return Unmapped(raw)


def read_trace(path, mapping: Mapping):
    """Yield one observed event per non-empty, non-comment line."""
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            yield map_event(mapping, text)
