import pytest

from cspmon.bench import (CSV_HEADER, BenchPlan, ParamMismatch,
                          RadiationViolation, SwapAdjacent, compare_backends,
                          derive_seed, generate_trace,
                          generate_worst_case_model, inject_fault,
                          linear_fit, per_event_spread, render_csv,
                          run_bench, synth_scaling, synthesize_worst_case,
                          worst_case_events, write_csv)
from cspmon.errors import PositionError
from cspmon.lts import Event, events_of
from cspmon.monitor import Mode, OracleIndex, PassSoFar, check_trace


def test_smallest_worst_case_model_text():
    text = generate_worst_case_model(1)
    assert text.splitlines() == ["channel e_0", "S_0 = e_0 -> S_0"]


def test_worst_case_model_sizes():
    for n in (1, 10, 100):
        lts = synthesize_worst_case(n)
        assert lts.n_states == n
        assert lts.n_transitions == n * n
        full = frozenset(worst_case_events(n))
        assert lts.alphabet == full
        for state in range(lts.n_states):
            assert events_of(lts, state) == full


def test_worst_case_model_rejects_bad_size():
    with pytest.raises(ValueError):
        generate_worst_case_model(0)


def test_generate_trace_reproducible():
    first = generate_trace(10, 1000, seed=7)
    second = generate_trace(10, 1000, seed=7)
    assert first == second
    assert len(first) == 1000
    assert generate_trace(10, 1000, seed=8) != first
    assert generate_trace(5, 0, seed=1) == []


def test_generate_trace_stays_in_alphabet():
    events = frozenset(worst_case_events(6))
    assert all(e in events for e in generate_trace(6, 500, seed=3))


def test_generated_traces_always_pass():
    for n in (1, 4, 9):
        lts = synthesize_worst_case(n)
        index = OracleIndex(lts)
        for seed in (0, 1):
            trace = generate_trace(n, 400, seed=seed)
            verdict, stats = check_trace(lts, Mode.STRICT, trace, index)
            assert isinstance(verdict, PassSoFar)
            assert stats.events_checked == 400


def _green_trace():
    move = Event("move", (1,))
    green = Event("radiation_level", ("Green",))
    inspect = Event("inspect", (1,))
    return [Event("mission_start"), inspect, green, move]


def test_inject_radiation_violation():
    trace = _green_trace()
    mutated, description = inject_fault(trace, RadiationViolation())
    assert mutated[2] == Event("radiation_level", ("Red",))
    assert mutated[:2] + mutated[3:] == trace[:2] + trace[3:]
    assert "radiation_level.Green" in description
    assert "radiation_level.Red" in description
    assert trace == _green_trace()  # input untouched


def test_inject_radiation_violation_needs_a_green():
    with pytest.raises(PositionError):
        inject_fault([Event("mission_start")], RadiationViolation())


def test_inject_swap_adjacent():
    trace = _green_trace()
    mutated, description = inject_fault(trace, SwapAdjacent(1))
    assert mutated[1] == trace[2]
    assert mutated[2] == trace[1]
    assert "swapped events at indices 1 and 2" in description


def test_inject_swap_bounds():
    trace = _green_trace()
    with pytest.raises(PositionError):
        inject_fault(trace, SwapAdjacent(3))  # no position 4
    with pytest.raises(PositionError):
        inject_fault(trace, SwapAdjacent(-1))


def test_inject_param_mismatch():
    trace = _green_trace()
    mutated, description = inject_fault(trace, ParamMismatch(3, 5))
    assert mutated[3] == Event("move", (5,))
    assert "replaced move.1 at index 3 with move.5" in description


def test_inject_param_mismatch_needs_parameter():
    trace = _green_trace()
    with pytest.raises(PositionError):
        inject_fault(trace, ParamMismatch(0, 5))  # mission_start is bare
    with pytest.raises(PositionError):
        inject_fault(trace, ParamMismatch(9, 5))


def test_bench_plan_validation():
    with pytest.raises(ValueError):
        BenchPlan(model_sizes=(), trace_lengths=(10,))
    with pytest.raises(ValueError):
        BenchPlan(model_sizes=(10,), trace_lengths=(0,))
    with pytest.raises(ValueError):
        BenchPlan(model_sizes=(10,), trace_lengths=(10,), repetitions=0)


def test_derive_seed_distinct_and_stable():
    seen = set()
    for n in (100, 200):
        for length in (1000, 10_000):
            for rep in range(3):
                value = derive_seed(5, n, length, rep)
                assert value == derive_seed(5, n, length, rep)
                seen.add(value)
    assert len(seen) == 12


def test_run_bench_row_shape():
    plan = BenchPlan(model_sizes=(20, 40), trace_lengths=(300,),
                     repetitions=2, seed=1)
    rows = run_bench(plan)
    synth_rows = [r for r in rows if r["rep"] == -1]
    check_rows = [r for r in rows if r["rep"] >= 0]
    assert len(synth_rows) == 2
    assert len(check_rows) == 4
    for row in synth_rows:
        n = row["n_states"]
        assert row["n_transitions"] == n * n
        assert row["trace_len"] == 0
        assert row["synth_s"] > 0.0
        assert row["check_s"] == ""
        assert row["mean_event_s"] == ""
    for row in check_rows:
        assert row["trace_len"] == 300
        assert row["rep"] in (0, 1)
        assert row["seed"] == derive_seed(1, row["n_states"], 300,
                                          row["rep"])
        assert row["synth_s"] == ""
        assert row["check_s"] > 0.0
        assert row["mean_event_s"] == pytest.approx(row["check_s"] / 300)


def test_run_bench_seeds_reproducible():
    plan = BenchPlan(model_sizes=(15,), trace_lengths=(100,),
                     repetitions=2, seed=9)
    first = run_bench(plan)
    second = run_bench(plan)
    keys = ("n_states", "n_transitions", "trace_len", "rep", "seed")

    def strip(rows):
        return [tuple(row[k] for k in keys) for row in rows]

    assert strip(first) == strip(second)


def test_csv_rendering(tmp_path):
    plan = BenchPlan(model_sizes=(10,), trace_lengths=(50,),
                     repetitions=1, seed=0)
    rows = run_bench(plan)
    text = render_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + len(rows)
    first = lines[1].split(",")
    assert first[:5] == ["10", "100", "0", "-1", "0"]
    assert first[6] == "" and first[7] == ""
    path = tmp_path / "bench.csv"
    write_csv(rows, path)
    assert path.read_bytes().decode() == text


def test_linear_fit_recovers_exact_line():
    xs = [1.0, 2.0, 3.0, 4.0]
    ys = [2.0 * x + 1.0 for x in xs]
    slope, intercept, r2 = linear_fit(xs, ys)
    assert slope == pytest.approx(2.0)
    assert intercept == pytest.approx(1.0)
    assert r2 == pytest.approx(1.0)


def test_linear_fit_flags_nonlinear_data():
    xs = [1.0, 2.0, 3.0, 4.0, 5.0]
    ys = [1.0, 16.0, 2.0, 50.0, 3.0]
    _, _, r2 = linear_fit(xs, ys)
    assert r2 < 0.9


def test_synth_scaling_on_synthetic_rows():
    def row(n, trace_len, rep, synth_s, check_s, mean_event_s):
        return {"n_states": n, "n_transitions": n * n,
                "trace_len": trace_len, "rep": rep, "seed": 0,
                "synth_s": synth_s, "check_s": check_s,
                "mean_event_s": mean_event_s}

    rows = []
    for n in (100, 200, 400):
        cost = n + n * n
        rows.append(row(n, 0, -1, 1e-6 * cost, "", ""))
        rows.append(row(n, 50, 0, "", 1.0, 0.02))
    slope, intercept, r2 = synth_scaling(rows)
    assert r2 == pytest.approx(1.0)
    assert slope == pytest.approx(1e-6)


def test_per_event_spread():
    def row(n, trace_len, rep, mean_event_s):
        return {"n_states": n, "n_transitions": n * n,
                "trace_len": trace_len, "rep": rep, "seed": 0,
                "synth_s": "", "check_s": 1.0,
                "mean_event_s": mean_event_s}

    rows = [
        row(10, 1000, 0, 2e-6),
        row(10, 1000, 1, 4e-6),
        row(10, 10_000, 0, 3e-6),
        row(20, 1000, 0, 9e-6),
    ]
    spread = per_event_spread(rows, 10)
    assert spread == pytest.approx(1.0)  # means: 3e-6 vs 3e-6
    with pytest.raises(ValueError):
        per_event_spread(rows, 99)
    with pytest.raises(ValueError):
        per_event_spread(rows, 20)  # single length at that size


def test_compare_backends_smoke():
    report = compare_backends(n=30, trace_len=5000, seed=2)
    assert set(report) >= {"python", "c"}
    for name, seconds in report.items():
        assert seconds > 0.0, name
