"""YAML run configuration.

Keys mirror the Config fields in snake_case; unknown keys are rejected
so typos fail loudly.  Relative paths are resolved against the config
file's directory.  The entry process is written in spec syntax, e.g.
``MAIN`` or ``ROVER({0..4}, Green)``; its arguments must be literals
(argument expressions are evaluated against the declarations only,
there are no variables to bind at the top level).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .errors import ConfigError, ParseError
from .lexer import tokenize
from .lts import SynthesisLimits
from .monitor import Mode
from .nodes import Call
from .parser import Parser

_TOP_KEYS = {"spec_path", "entry_process", "mode", "observable_events",
             "mapping_path", "input", "limits", "report_path"}


@dataclass(frozen=True)
class TraceFileInput:
    path: Path


@dataclass(frozen=True)
class ListenInput:
    kind: str  # "tcp" or "websocket"
    host: str
    port: int


@dataclass(frozen=True)
class Config:
    spec_path: Path
    entry_name: str
    entry_args: tuple  # literal argument expressions (AST), possibly empty
    mode: Mode
    input: object  # TraceFileInput | ListenInput
    observable_events: Optional[tuple] = None  # event texts, order kept
    mapping_path: Optional[Path] = None
    limits: SynthesisLimits = field(default_factory=SynthesisLimits)
    report_path: Optional[Path] = None


def parse_entry(text: str):
    """Parse an entry_process string into (name, argument expressions)."""
    try:
        tokens = tokenize(text)
        parser = Parser(tokens)
        process = parser.parse_prefix()
        if parser.pos != len(tokens):
            raise ConfigError("entry_process",
                              f"trailing input after {text!r}")
    except ParseError as exc:
        raise ConfigError("entry_process", str(exc)) from exc
    if not isinstance(process, Call):
        raise ConfigError("entry_process",
                          "must be a process name, optionally with "
                          "literal arguments")
    return process.name, process.args


def load_config(path) -> Config:
    """Read and validate a YAML config file."""
    path = Path(path)
    try:
        raw_text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc}") from exc
    try:
        data = yaml.safe_load(raw_text)
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"not valid YAML: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(str(path), "config must be a YAML mapping")

    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown config key")

    base = path.parent

    spec_path = _require_str(data, "spec_path")
    spec_file = (base / spec_path).resolve()
    if not spec_file.is_file():
        raise ConfigError("spec_path", f"no such file: {spec_file}")

    entry_name, entry_args = parse_entry(_require_str(data, "entry_process"))

    mode_text = data.get("mode", "strict")
    try:
        mode = Mode(mode_text)
    except ValueError:
        raise ConfigError("mode", f"expected 'strict' or 'permissive', "
                                  f"got {mode_text!r}") from None

    observable = data.get("observable_events")
    if observable is not None:
        if (not isinstance(observable, list)
                or not all(isinstance(e, str) for e in observable)):
            raise ConfigError("observable_events",
                              "expected a list of event texts")
        observable = tuple(observable)

    mapping_path = data.get("mapping_path")
    if mapping_path is not None:
        if not isinstance(mapping_path, str):
            raise ConfigError("mapping_path", "expected a path string")
        mapping_path = (base / mapping_path).resolve()
        if not mapping_path.is_file():
            raise ConfigError("mapping_path", f"no such file: {mapping_path}")

    input_source = _parse_input(data, base)
    limits = _parse_limits(data.get("limits"))

    report_path = data.get("report_path")
    if report_path is not None:
        if not isinstance(report_path, str):
            raise ConfigError("report_path", "expected a path string")
        report_path = (base / report_path).resolve()

    return Config(
        spec_path=spec_file,
        entry_name=entry_name,
        entry_args=entry_args,
        mode=mode,
        input=input_source,
        observable_events=observable,
        mapping_path=mapping_path,
        limits=limits,
        report_path=report_path,
    )


def _require_str(data: dict, key: str) -> str:
    value = data.get(key)
    if not isinstance(value, str) or not value:
        raise ConfigError(key, "required, expected a non-empty string")
    return value


def _parse_input(data: dict, base: Path):
    section = data.get("input")
    if not isinstance(section, dict):
        raise ConfigError("input", "required, expected a mapping with "
                                   "'trace_file' or 'listen'")
    unknown = set(section) - {"trace_file", "listen"}
    if unknown:
        raise ConfigError(f"input.{sorted(unknown)[0]}", "unknown input key")
    has_file = "trace_file" in section
    has_listen = "listen" in section
    if has_file == has_listen:
        raise ConfigError("input", "exactly one of 'trace_file' and "
                                   "'listen' must be given")
    if has_file:
        trace = section["trace_file"]
        if not isinstance(trace, str):
            raise ConfigError("input.trace_file", "expected a path string")
        trace_path = (base / trace).resolve()
        if not trace_path.is_file():
            raise ConfigError("input.trace_file",
                              f"no such file: {trace_path}")
        return TraceFileInput(trace_path)

    listen = section["listen"]
    if not isinstance(listen, dict):
        raise ConfigError("input.listen", "expected a mapping")
    unknown = set(listen) - {"kind", "host", "port"}
    if unknown:
        raise ConfigError(f"input.listen.{sorted(unknown)[0]}",
                          "unknown listen key")
    kind = listen.get("kind")
    if kind not in ("tcp", "websocket"):
        raise ConfigError("input.listen.kind",
                          "expected 'tcp' or 'websocket'")
    host = listen.get("host", "127.0.0.1")
    if not isinstance(host, str):
        raise ConfigError("input.listen.host", "expected a string")
    port = listen.get("port")
    if not isinstance(port, int) or isinstance(port, bool) or port < 0:
        raise ConfigError("input.listen.port",
                          "required, expected a non-negative integer")
    return ListenInput(kind, host, port)


def _parse_limits(section) -> SynthesisLimits:
    if section is None:
        return SynthesisLimits()
    if not isinstance(section, dict):
        raise ConfigError("limits", "expected a mapping")
    unknown = set(section) - {"max_states", "max_transitions"}
    if unknown:
        raise ConfigError(f"limits.{sorted(unknown)[0]}", "unknown limits key")
    kwargs = {}
    for key in ("max_states", "max_transitions"):
        if key in section:
            value = section[key]
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ConfigError(f"limits.{key}",
                                  "expected a positive integer")
            kwargs[key] = value
    return SynthesisLimits(**kwargs)
