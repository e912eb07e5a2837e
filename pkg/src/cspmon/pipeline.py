"""Config-driven oracle construction shared by the CLI entry points.

The offline and online checkers run the same preparation: parse and
validate the model, enumerate the alphabet, synthesize the transition
system, hide whatever the system under analysis cannot see, run the
determinism gate, determinize and index.  ``build_oracle`` performs all
of it; ``load_and_synthesize`` stops after hiding for the tools that
only inspect or gate the raw system.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .config import Config
from .errors import ConfigError
from .lts import Lts, check_determinism, determinize, hide
from .monitor import Mode, OracleIndex
from .parser import parse_spec
from .resolver import build_symbols, validate_spec
from .semantics import eval_expr
from .synth import enumerate_alphabet, synthesize_lts
from .traceio import Mapping, empty_mapping, load_mapping, parse_event_text


@dataclass
class SynthesisResult:
    spec: object
    syms: object
    alphabet: frozenset          # full model alphabet, before hiding
    hidden: frozenset
    raw: Lts                     # as synthesized, before hiding
    lts: Lts                     # after hiding
    synth_only_s: float          # synthesize_lts alone


@dataclass
class OracleBuild:
    synthesis: SynthesisResult
    det_report: object
    oracle: Optional[Lts]        # determinized; None when the gate fails
    index: Optional[OracleIndex]
    mapping: Mapping
    synth_s: float               # synthesize + hide + gate + determinize + index


def resolve_entry_args(config: Config, syms) -> tuple:
    """Evaluate the entry process arguments down to values."""
    return tuple(eval_expr(arg, {}, syms) for arg in config.entry_args)


def observable_set(config: Config, alphabet: frozenset) -> frozenset:
    """The events the monitored system can exhibit; defaults to everything."""
    if config.observable_events is None:
        return alphabet
    events = []
    for text in config.observable_events:
        event = parse_event_text(text, alphabet)
        if event is None:
            raise ConfigError(
                "observable_events",
                f"{text!r} is not an event of the model alphabet")
        events.append(event)
    return frozenset(events)


def load_and_synthesize(config: Config) -> SynthesisResult:
    source = Path(config.spec_path).read_text(encoding="utf-8")
    spec = validate_spec(parse_spec(source))
    syms = build_symbols(spec)
    alphabet = enumerate_alphabet(spec, syms)
    entry_args = resolve_entry_args(config, syms)

    start = time.perf_counter()
    raw = synthesize_lts(spec, config.entry_name, entry_args,
                         config.limits, syms)
    synth_only_s = time.perf_counter() - start

    hidden = alphabet - observable_set(config, alphabet)
    lts = hide(raw, hidden)
    return SynthesisResult(spec, syms, alphabet, hidden, raw, lts,
                           synth_only_s)


def build_oracle(config: Config) -> OracleBuild:
    """Run the full preparation pipeline for check/listen.

    When the determinism gate rejects the model, ``oracle`` and
    ``index`` stay None and ``det_report`` carries the witness; callers
    abort before monitoring.
    """
    start = time.perf_counter()
    synthesis = load_and_synthesize(config)
    det_report = check_determinism(synthesis.lts, config.limits)
    if det_report.deterministic:
        oracle = determinize(synthesis.lts, config.limits)
        index = OracleIndex(oracle)
    else:
        oracle = None
        index = None
    synth_s = time.perf_counter() - start

    if config.mapping_path is not None:
        mapping = load_mapping(config.mapping_path, synthesis.alphabet)
    else:
        mapping = empty_mapping(synthesis.alphabet)
    return OracleBuild(synthesis, det_report, oracle, index, mapping, synth_s)


# --------------------------------------------------------------------------
# Run reports
# --------------------------------------------------------------------------

REPORT_HEADER = ("total_s", "synth_s", "check_s", "mean_event_s",
                 "events_checked", "total_events", "verdict")


@dataclass(frozen=True)
class RunReport:
    total_s: float
    synth_s: float
    check_s: float
    mean_event_s: float
    events_checked: int
    total_events: int
    verdict: str  # "pass" or "fail"

    def row(self) -> tuple:
        return (f"{self.total_s:.6f}", f"{self.synth_s:.6f}",
                f"{self.check_s:.6f}", f"{self.mean_event_s:.9f}",
                str(self.events_checked), str(self.total_events),
                self.verdict)


def render_report_text(report: RunReport) -> str:
    lines = [
        f"verdict: {report.verdict}",
        f"events checked: {report.events_checked}/{report.total_events}",
        f"total time: {report.total_s:.6f} s",
        f"synthesis time: {report.synth_s:.6f} s",
        f"checking time: {report.check_s:.6f} s",
        f"mean time per event: {report.mean_event_s:.9f} s",
    ]
    return "\n".join(lines) + "\n"


def render_report_csv(report: RunReport) -> str:
    return ",".join(REPORT_HEADER) + "\n" + ",".join(report.row()) + "\n"


def write_report(path, report: RunReport) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        text = render_report_csv(report)
    else:
        text = render_report_text(report)
    path.write_text(text, encoding="utf-8")
