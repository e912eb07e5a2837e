"""Stress-test generators, timing harness and fault injection.

The worst-case model family has n states that each offer the complete
alphabet {e_0 .. e_(n-1)}: S_i answers every e_j by moving to S_j, so
synthesis materializes exactly n states and n^2 event transitions.  The
generated text encodes S_0 explicitly and lets every other S_i delegate
to it (``S_i = S_0``), which is semantically the same full choice while
keeping the source and its AST linear in n; the synthesized graph is
identical either way.

Timing discipline: synthesis rows time synthesize_lts alone (averaged
over repetitions); check rows time the next-state walk alone, one row
per repetition.  Everything is reproducible from the plan seed except
the timing columns themselves.
"""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import PositionError
from .kernel import available_backends
from .lts import DEFAULT_LIMITS, Event, Lts, SynthesisLimits, determinize
from .monitor import Mode, OracleIndex, PassSoFar, check_trace
from .parser import parse_spec
from .resolver import build_symbols, validate_spec
from .synth import synthesize_lts

CSV_HEADER = ("n_states", "n_transitions", "trace_len", "rep", "seed",
              "synth_s", "check_s", "mean_event_s")


# --------------------------------------------------------------------------
# Generators
# --------------------------------------------------------------------------

def generate_worst_case_model(n: int) -> str:
    """Spec text for the n-state full-alphabet stress model."""
    if n < 1:
        raise ValueError("model size must be at least 1")
    lines = [f"channel e_{i}" for i in range(n)]
    choice = " [] ".join(f"e_{j} -> S_{j}" for j in range(n))
    lines.append(f"S_0 = {choice}")
    lines.extend(f"S_{i} = S_0" for i in range(1, n))
    return "\n".join(lines) + "\n"


def worst_case_events(n: int) -> list:
    return [Event(f"e_{i}") for i in range(n)]


def generate_trace(n: int, length: int, seed: int) -> list:
    """``length`` events drawn uniformly from {e_0 .. e_(n-1)}."""
    if n < 1:
        raise ValueError("alphabet size must be at least 1")
    if length < 0:
        raise ValueError("trace length must be non-negative")
    rng = random.Random(seed)
    events = worst_case_events(n)
    return [events[rng.randrange(n)] for _ in range(length)]


def synthesize_worst_case(n: int, limits: SynthesisLimits = DEFAULT_LIMITS) -> Lts:
    spec = validate_spec(parse_spec(generate_worst_case_model(n)))
    return synthesize_lts(spec, "S_0", (), limits)


# --------------------------------------------------------------------------
# Fault injection
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RadiationViolation:
    """Turn the first radiation_level.Green into radiation_level.Red."""


@dataclass(frozen=True)
class SwapAdjacent:
    position: int  # exchanged with position + 1


@dataclass(frozen=True)
class ParamMismatch:
    position: int
    substitute: object  # replacement for the event's last parameter


_GREEN = Event("radiation_level", ("Green",))
_RED = Event("radiation_level", ("Red",))


def inject_fault(trace, kind):
    """Mutate a copy of the trace; returns (mutated trace, description)."""
    mutated = list(trace)
    if isinstance(kind, RadiationViolation):
        for i, item in enumerate(mutated):
            if item == _GREEN:
                mutated[i] = _RED
                return mutated, (f"replaced {_GREEN.text} at index {i} "
                                 f"with {_RED.text}")
        raise PositionError(f"no {_GREEN.text} event in the trace")
    if isinstance(kind, SwapAdjacent):
        i = kind.position
        if not 0 <= i < len(mutated) - 1:
            raise PositionError(
                f"cannot swap positions {i} and {i + 1} in a trace of "
                f"length {len(mutated)}")
        mutated[i], mutated[i + 1] = mutated[i + 1], mutated[i]
        return mutated, (f"swapped events at indices {i} and {i + 1} "
                         f"({_text(mutated[i + 1])} <-> {_text(mutated[i])})")
    if isinstance(kind, ParamMismatch):
        i = kind.position
        if not 0 <= i < len(mutated):
            raise PositionError(
                f"position {i} outside a trace of length {len(mutated)}")
        original = mutated[i]
        if not isinstance(original, Event) or not original.values:
            raise PositionError(
                f"event at position {i} carries no parameter to replace")
        replacement = Event(original.channel,
                            original.values[:-1] + (kind.substitute,))
        mutated[i] = replacement
        return mutated, (f"replaced {original.text} at index {i} "
                         f"with {replacement.text}")
    raise TypeError(f"unknown fault kind {kind!r}")


def _text(item) -> str:
    return item.text if isinstance(item, Event) else str(item)


# --------------------------------------------------------------------------
# Timing harness
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchPlan:
    model_sizes: tuple
    trace_lengths: tuple
    repetitions: int = 10
    seed: int = 0
    output: Path = None

    def __post_init__(self) -> None:
        if not self.model_sizes or any(n < 1 for n in self.model_sizes):
            raise ValueError("model sizes must be positive")
        if any(length < 1 for length in self.trace_lengths):
            raise ValueError("trace lengths must be positive")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")


def derive_seed(seed: int, n: int, length: int, rep: int) -> int:
    return (seed * 1_000_003 + n * 8_191 + length * 131 + rep) % (1 << 63)


def run_bench(plan: BenchPlan, limits: SynthesisLimits = DEFAULT_LIMITS) -> list:
    """Execute the plan; returns rows and writes CSV when requested.

    One synthesis row per model size (synth_s holds the mean over
    repetitions, trace_len 0, rep -1); one check row per
    (size, length, repetition).
    """
    rows = []
    for n in plan.model_sizes:
        spec = validate_spec(parse_spec(generate_worst_case_model(n)))
        synth_times = []
        lts = None
        for _ in range(plan.repetitions):
            start = time.perf_counter()
            lts = synthesize_lts(spec, "S_0", (), limits)
            synth_times.append(time.perf_counter() - start)
        mean_synth = sum(synth_times) / len(synth_times)
        rows.append({
            "n_states": lts.n_states,
            "n_transitions": lts.n_transitions,
            "trace_len": 0,
            "rep": -1,
            "seed": plan.seed,
            "synth_s": mean_synth,
            "check_s": "",
            "mean_event_s": "",
        })

        oracle = determinize(lts, limits)
        index = OracleIndex(oracle)
        # Touch every table cell once so the timed repetitions measure
        # steady-state per-event cost; otherwise the first traversal
        # pays the table's page-fault and cache-fill bill, charged to
        # whichever trace length happens to run first.
        int(index.table.sum())
        for length in plan.trace_lengths:
            for rep in range(plan.repetitions):
                rep_seed = derive_seed(plan.seed, n, length, rep)
                trace = generate_trace(n, length, rep_seed)
                verdict, stats = check_trace(oracle, Mode.STRICT, trace,
                                             index=index)
                if not isinstance(verdict, PassSoFar):
                    raise AssertionError(
                        "generated trace rejected; the stress model must "
                        "accept its full alphabet everywhere")
                rows.append({
                    "n_states": lts.n_states,
                    "n_transitions": lts.n_transitions,
                    "trace_len": length,
                    "rep": rep,
                    "seed": rep_seed,
                    "synth_s": "",
                    "check_s": stats.check_s,
                    "mean_event_s": stats.mean_event_s,
                })

    if plan.output is not None:
        write_csv(rows, plan.output)
    return rows


def write_csv(rows: list, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        _write_csv_handle(rows, handle)


def render_csv(rows: list) -> str:
    buffer = io.StringIO()
    _write_csv_handle(rows, buffer)
    return buffer.getvalue()


def _write_csv_handle(rows: list, handle) -> None:
    writer = csv.writer(handle)
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_cell(row[key]) for key in CSV_HEADER])


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.9f}"
    return str(value)


def linear_fit(xs, ys):
    """Least-squares line through (xs, ys); returns (slope, intercept, r2)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    predicted = slope * x + intercept
    residual = float(np.sum((y - predicted) ** 2))
    total = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if total == 0.0 else 1.0 - residual / total
    return float(slope), float(intercept), r2


def synth_scaling(rows: list):
    """Fit mean synthesis time against states+transitions over bench rows."""
    points = [(row["n_states"] + row["n_transitions"], row["synth_s"])
              for row in rows if row["trace_len"] == 0]
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return linear_fit(xs, ys)


def per_event_spread(rows: list, n_states: int) -> float:
    """max/min ratio of mean per-event times across trace lengths at one size."""
    by_length = {}
    for row in rows:
        if row["n_states"] == n_states and row["trace_len"] > 0:
            by_length.setdefault(row["trace_len"], []).append(
                row["mean_event_s"])
    means = [sum(v) / len(v) for v in by_length.values()]
    if len(means) < 2:
        raise ValueError("need at least two trace lengths to compare")
    return max(means) / min(means)


# --------------------------------------------------------------------------
# Backend comparison
# --------------------------------------------------------------------------

def compare_backends(n: int = 500, trace_len: int = 200_000,
                     seed: int = 0) -> dict:
    """Mean per-event seconds for each available kernel backend.

    Runs the identical table walk through every backend and also checks
    they return identical results.
    """
    lts = synthesize_worst_case(n)
    index = OracleIndex(determinize(lts))
    trace = generate_trace(n, trace_len, seed)
    ids = np.fromiter((index.column_of(e) for e in trace), dtype=np.int32,
                      count=len(trace))

    results = {}
    outcomes = set()
    for name, runner in available_backends().items():
        start = time.perf_counter()
        state, fail_pos = runner(index.table, ids, lts.initial, True)
        elapsed = time.perf_counter() - start
        outcomes.add((int(state), int(fail_pos)))
        results[name] = elapsed / max(len(trace), 1)
    if len(outcomes) != 1:
        raise AssertionError(f"kernel backends disagree: {outcomes}")
    return results
