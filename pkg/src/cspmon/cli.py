"""Command-line interface.

Subcommands: check (offline trace), listen (online server), synth
(export the transition system), detcheck (determinism gate only), bench
(stress timing).  Exit codes: 0 pass, 1 trace failure, 2 non-deterministic
oracle, 3 usage or config error, 4 synthesis limit or I/O error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import bench as bench_mod
from .config import ListenInput, TraceFileInput, load_config
from .errors import (
    AlphabetError, BindError, ConfigError, DomainError, EvalError, LexError,
    LimitExceeded, MappingError, NondeterministicOracle, ParseError,
    PositionError, ResolveError,
)
from .kernel import BACKEND
from .lts import check_determinism, dump_lts
from .monitor import Fail, FailReason, check_trace, new_session, observed_text
from .pipeline import (
    RunReport, build_oracle, load_and_synthesize, write_report,
)
from .server import create_server
from .traceio import read_trace

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_NONDET = 2
EXIT_USAGE = 3
EXIT_LIMIT = 4

_TRACE_TAIL = 20


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; we reserve 2 for the gate."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="cspmon",
        description="Check event streams against a CSP model.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[],
                           help="check a recorded trace file")
    check.add_argument("config", help="YAML config with a trace_file input")
    check.set_defaults(func=_cmd_check)

    listen = sub.add_parser("listen", help="serve an online monitor")
    listen.add_argument("config", help="YAML config with a listen input")
    listen.set_defaults(func=_cmd_listen)

    synth = sub.add_parser("synth",
                           help="synthesize and export the transition system")
    synth.add_argument("config")
    synth.add_argument("--out", help="write the dump here instead of stdout")
    synth.set_defaults(func=_cmd_synth)

    detcheck = sub.add_parser("detcheck", help="run the determinism gate only")
    detcheck.add_argument("config")
    detcheck.set_defaults(func=_cmd_detcheck)

    bench = sub.add_parser("bench", help="stress-test synthesis and checking")
    bench.add_argument("--sizes", type=_int_list, default=(100, 200),
                       help="comma-separated model sizes (default 100,200)")
    bench.add_argument("--lengths", type=_int_list, default=(1000,),
                       help="comma-separated trace lengths (default 1000)")
    bench.add_argument("--reps", type=int, default=2,
                       help="repetitions per measurement (default 2)")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out", help="write the CSV table here")
    bench.add_argument("--compare-backends", action="store_true",
                       help="time the pure-Python and compiled kernels")
    bench.set_defaults(func=_cmd_bench)
    return parser


def _int_list(text: str) -> tuple:
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def _cmd_check(args) -> int:
    config = load_config(args.config)
    if not isinstance(config.input, TraceFileInput):
        raise ConfigError("input", "the check command needs a trace_file input")

    start = time.perf_counter()
    build = build_oracle(config)
    if not build.det_report.deterministic:
        _print_witness(build.det_report.witness)
        return EXIT_NONDET

    oracle = build.oracle
    print(f"oracle: {oracle.n_states} states, {oracle.n_transitions} "
          f"transitions, {len(oracle.alphabet)} events "
          f"({config.mode.value} mode)")

    trace = read_trace(config.input.path, build.mapping)
    verdict, stats = check_trace(oracle, config.mode, trace,
                                 index=build.index)
    total_s = time.perf_counter() - start

    failed = isinstance(verdict, Fail)
    print(f"verdict: {'fail' if failed else 'pass'}")
    print(f"events checked: {stats.events_checked}/{stats.total_events}")
    if failed:
        _print_failure(verdict, build.index)

    if config.report_path is not None:
        report = RunReport(
            total_s=total_s,
            synth_s=build.synth_s,
            check_s=stats.check_s,
            mean_event_s=stats.mean_event_s,
            events_checked=stats.events_checked,
            total_events=stats.total_events,
            verdict="fail" if failed else "pass",
        )
        write_report(config.report_path, report)
        print(f"report written to {config.report_path}")
    return EXIT_FAIL if failed else EXIT_PASS


def _cmd_listen(args) -> int:
    config = load_config(args.config)
    if not isinstance(config.input, ListenInput):
        raise ConfigError("input", "the listen command needs a listen input")

    build = build_oracle(config)
    if not build.det_report.deterministic:
        _print_witness(build.det_report.witness)
        return EXIT_NONDET

    def session_factory():
        return new_session(build.oracle, config.mode, build.index)

    def on_close(summary: str) -> None:
        print(summary, flush=True)

    listen = config.input
    server = create_server(listen.kind, listen.host, listen.port,
                           session_factory, build.mapping, on_close)
    print(f"listening on {listen.kind}://{listen.host}:{server.port} "
          f"({config.mode.value} mode, oracle: {build.oracle.n_states} "
          f"states)", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
    return EXIT_PASS


def _cmd_synth(args) -> int:
    config = load_config(args.config)
    synthesis = load_and_synthesize(config)
    lts = synthesis.lts
    print(f"states: {lts.n_states}")
    print(f"transitions: {lts.n_transitions}")
    print(f"alphabet: {len(synthesis.alphabet)} events"
          + (f" ({len(synthesis.hidden)} hidden)" if synthesis.hidden else ""))
    print(f"synthesis time: {synthesis.synth_only_s:.6f} s")
    dump = dump_lts(lts)
    if args.out:
        Path(args.out).write_text(dump, encoding="utf-8")
        print(f"dump written to {args.out}")
    else:
        print(dump, end="")
    return EXIT_PASS


def _cmd_detcheck(args) -> int:
    config = load_config(args.config)
    synthesis = load_and_synthesize(config)
    report = check_determinism(synthesis.lts, config.limits)
    if report.deterministic:
        print("deterministic: the model can monitor as-is")
        return EXIT_PASS
    _print_witness(report.witness)
    return EXIT_NONDET


def _cmd_bench(args) -> int:
    if args.compare_backends:
        results = bench_mod.compare_backends()
        print(f"active backend: {BACKEND}")
        for name in sorted(results):
            print(f"  {name}: {results[name]:.9f} s/event")
        return EXIT_PASS

    plan = bench_mod.BenchPlan(
        model_sizes=args.sizes,
        trace_lengths=args.lengths,
        repetitions=args.reps,
        seed=args.seed,
        output=Path(args.out) if args.out else None,
    )
    rows = bench_mod.run_bench(plan)
    for row in rows:
        if row["trace_len"] == 0:
            print(f"n={row['n_states']}: {row['n_transitions']} transitions, "
                  f"synthesis {row['synth_s']:.6f} s (mean of {plan.repetitions})")
    check_rows = [row for row in rows if row["trace_len"] > 0]
    if check_rows:
        mean = (sum(row["mean_event_s"] for row in check_rows)
                / len(check_rows))
        print(f"checking: {mean:.9f} s/event over {len(check_rows)} runs "
              f"({BACKEND} backend)")
    if len(plan.model_sizes) >= 2:
        slope, intercept, r2 = bench_mod.synth_scaling(rows)
        print(f"synthesis scaling vs states+transitions: "
              f"slope {slope:.3e} s/unit, R^2 {r2:.4f}")
    if plan.output is not None:
        print(f"table written to {plan.output}")
    return EXIT_PASS


# --------------------------------------------------------------------------
# Rendering helpers
# --------------------------------------------------------------------------

def _print_witness(witness) -> None:
    trace = ", ".join(event.text for event in witness.trace)
    print("non-deterministic oracle: the model cannot serve as a monitor")
    print(f"witness trace: <{trace}>")
    print(f"ambiguous event: {witness.ambiguous.text}")
    print("after the witness trace the model can be in states that disagree "
          "on this event")


def _render_item(item, index) -> str:
    text = observed_text(item)
    if index is not None and index.column_of(item) < 0:
        return f"[{text}]"
    return text


def _print_failure(verdict: Fail, index) -> None:
    cx = verdict.counterexample
    position = len(cx.failing_trace)
    print(f"failing event: {_render_item(verdict.failing_event, index)} "
          f"(event {position} of the trace)")
    if cx.reason is FailReason.NOT_IN_ALPHABET:
        print("reason: the event is outside the model alphabet")
    else:
        print("reason: the event is in the alphabet but not enabled here")
    acceptable = cx.acceptable_texts()
    print("acceptable here: " + (", ".join(acceptable) if acceptable
                                 else "(none)"))
    items = [_render_item(item, index) for item in cx.failing_trace]
    if len(items) > _TRACE_TAIL:
        omitted = len(items) - _TRACE_TAIL
        shown = ["..."] + items[-_TRACE_TAIL:]
        print(f"trace ({omitted} earlier events omitted, [] marks events "
              f"outside the alphabet):")
    else:
        shown = items
        print("trace ([] marks events outside the alphabet):")
    print("  " + " ".join(shown))


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------

def run_cli(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, MappingError, LexError, ParseError, ResolveError,
            EvalError, DomainError, AlphabetError, PositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NondeterministicOracle as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONDET
    except LimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except BindError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
