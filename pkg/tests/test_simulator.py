from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigma_ca.ca_compiler import phi, tm_config_from_ca
from sigma_ca.core_model import (
    ARROW_LEFT,
    Configuration,
    ConstantTail,
    GeneratorStuck,
    PeriodicTail,
    TrackedCell,
    identity_rule,
    pair,
    shift_rule,
    validate_local,
)
from sigma_ca.guest_machines import Q0, tm_step
from sigma_ca.harness import canonical_witness
from sigma_ca.simulator import (
    TraceReport,
    detect_signaling,
    find_head,
    iterate,
    render_cell,
    render_line,
    run_trace,
    step,
    window_recurrences,
)

ZERO = {"kind": "const", "bit": 0}
SKOLEM = {"kind": "skolem"}


def toy(cells, left="l", right="r") -> Configuration:
    return Configuration(0, list(cells), ConstantTail(left), ConstantTail(right))


def test_identity_step_widens_by_the_radius():
    cfg = toy("abc")
    out = step(identity_rule(5, 2), cfg)
    assert out.window == (-2, 4)
    assert out.cells() == list("llabcrr")


def test_left_shift():
    out = step(shift_rule(5), toy("abc"))
    assert out.segment(0, 2) == list("bcr")
    assert out.cell_at(-1) == "a"


def test_periodic_tails_are_stepped_exactly():
    cfg = Configuration(0, ["x"], PeriodicTail(("a", "b")), PeriodicTail(("c", "d", "e")))
    out = step(shift_rule(9), cfg)
    ref = cfg.copy()
    for x in range(-8, 12):
        assert out.cell_at(x) == ref.cell_at(x + 1)


def test_first_compiled_step_leaves_q0(parity):
    cfg = phi(parity, "1", ZERO, SKOLEM)
    tm = tm_step(parity.checker, tm_config_from_ca(parity, cfg.copy(), -1, 1))
    out = step(parity.rule, cfg)
    assert find_head(out, -3, 5) == (tm.head, tm.state) and tm.state != Q0


def test_zero_fuel_gives_an_empty_report(parity):
    report = run_trace(parity.rule, phi(parity, "1", ZERO, SKOLEM), 0)
    assert (report.steps, report.signaling_times, report.spread_at, report.recurrence_times) == (0, [], None, None)
    with pytest.raises(ValueError):
        run_trace(parity.rule, phi(parity, "1", ZERO, SKOLEM), -1)


def test_always_reject_signals_only_at_time_zero(reject_all):
    report = run_trace(reject_all.rule, phi(reject_all, "1", ZERO, SKOLEM), 10**4, signal_word="1")
    assert report.signaling_times == [0]
    assert report.spread_at is None
    assert report.static_from is not None


def test_parity_keeps_signalling(parity):
    c_set, skolem = canonical_witness(parity, "11").c_set, canonical_witness(parity, "11").skolem
    report = run_trace(parity.rule, phi(parity, "11", c_set, skolem), 10**6, signal_word="11", stop_after_signals=3)
    assert len(report.signaling_times) >= 4
    assert report.signaling_times[:4] == [0, 240, 860, 2078]
    assert report.signaling_times == sorted(set(report.signaling_times))


def test_identity_recurs_every_step():
    cfg = toy([1, 2, 3], 0, 0)
    assert window_recurrences(identity_rule(4, 1), cfg, 25, 3) == list(range(1, 26))
    with pytest.raises(ValueError):
        window_recurrences(identity_rule(4, 1), cfg, 5, 0)


def test_shift_never_recurs_on_a_ramp():
    cfg = Configuration(0, [1, 2, 3, 4], ConstantTail(0), ConstantTail(0))
    assert window_recurrences(shift_rule(5), cfg, 30, 2) == []


def test_unary_window_never_returns(systems):
    system = systems("MEMBER", "unary")
    w = "01"
    wit = canonical_witness(system, w)
    assert window_recurrences(system.rule, phi(system, w, wit.c_set, wit.skolem), 20000, len(w) + 4) == []


def test_counter_window_returns(systems):
    system = systems("MEMBER", "counter")
    wit = canonical_witness(system, "")
    times = window_recurrences(system.rule, phi(system, "", wit.c_set, wit.skolem), 12000, 4)
    assert times and times[0] == 9659


def test_spread_is_detected_and_can_stop_the_run(parity):
    cfg = phi(parity, "1", ZERO, SKOLEM)
    cells, lo = cfg.live()
    cells[2 - lo] = parity.alphabet.index(TrackedCell(pair(0, 1), ARROW_LEFT, "."))  # c_0 = 1 ...
    cfg.cell_at(4)
    cells, lo = cfg.live()
    cells[4 - lo] = parity.alphabet.index(TrackedCell(pair(0, 1), ARROW_LEFT, "."))  # ... c_1 = 0, c_2 = 1
    report = run_trace(parity.rule, cfg, 100, signal_word="1", stop_on_spread=True)
    assert report.spread_at == 1 and report.spread_pos == 3
    assert report.steps == 1
    assert "t=1 SPREAD@3" in report.event_lines()


def test_stalled_streams_are_reported(parity):
    cfg = phi(parity, "1", ZERO, {"kind": "stall"})
    with pytest.raises(GeneratorStuck):
        run_trace(parity.rule, cfg, 10)


def test_event_lines_are_ordered():
    report = TraceReport(steps=9, signaling_times=[0, 4], spread_at=4, spread_pos=-2, recurrence_times=[4, 7])
    assert report.event_lines() == ["t=0 SIGNAL", "t=4 SIGNAL", "t=4 SPREAD@-2", "t=4 RECUR", "t=7 RECUR"]


def test_rendering(parity):
    a = parity.alphabet
    assert render_cell(a, 0) == "!!!!"
    cfg = phi(parity, "1", {"kind": "const", "bit": 1}, SKOLEM)
    assert render_line(cfg, 0, (-1, 2)) == "t=0 [-1,2] # >.1 q.| <.10<. head=q0@0"


# -- engines, determinism, speed of light ---------------------------------------------------

runs = st.tuples(
    st.sampled_from(["PARITY", "MEMBER", "HALT-SEARCH"]),
    st.sampled_from(["unary", "counter"]),
    st.text("01", max_size=3),
    st.sampled_from([ZERO, {"kind": "periodic", "bits": "10"}, {"kind": "prefix", "bits": "011", "then": 0}]),
    st.sampled_from([SKOLEM, {"kind": "skolem", "a": 2, "b": 3}, {"kind": "const", "bit": 0}]),
    st.integers(0, 300),
)


@settings(max_examples=15, deadline=None)
@given(runs)
def test_sparse_and_dense_engines_agree(systems, run):
    family, variant, w, c_set, skolem, fuel = run
    system = systems(family, variant)
    reports = [
        run_trace(system.rule, phi(system, w, c_set, skolem), fuel, signal_word=w, window=len(w) + 3, engine=e)
        for e in ("sparse", "dense")
    ]
    sparse, dense = reports
    assert sparse.event_lines() == dense.event_lines()
    assert sparse.final.segment(-fuel - 3, fuel + len(w) + 6) == dense.final.segment(-fuel - 3, fuel + len(w) + 6)


@settings(max_examples=15, deadline=None)
@given(runs, st.integers(1, 50))
def test_widening_the_initial_window_changes_nothing(systems, run, extra):
    family, variant, w, c_set, skolem, fuel = run
    system = systems(family, variant)
    narrow = phi(system, w, c_set, skolem)
    wide = phi(system, w, c_set, skolem).widen(-1 - extra, len(w) + 1 + extra)
    a = run_trace(system.rule, narrow, fuel * 5, signal_word=w, window=2)
    b = run_trace(system.rule, wide, fuel * 5, signal_word=w, window=2)
    assert a.event_lines() == b.event_lines()
    span = (-extra - 10, len(w) + extra + 10)
    assert a.final.segment(*span) == b.final.segment(*span)


@settings(max_examples=10, deadline=None)
@given(runs)
def test_traces_are_deterministic(systems, run):
    family, variant, w, c_set, skolem, fuel = run
    system = systems(family, variant)
    a, b = (run_trace(system.rule, phi(system, w, c_set, skolem), fuel, signal_word=w, window=3) for _ in "ab")
    assert a.event_lines() == b.event_lines() and a.static_from == b.static_from


@pytest.mark.parametrize("family,variant,w", [("PARITY", "unary", "11"), ("MEMBER", "counter", "01")])
def test_signalling_implies_local_validity(systems, family, variant, w):
    system = systems(family, variant)
    wit = canonical_witness(system, w)
    seen = 0
    for t, cur in iterate(system.rule, phi(system, w, wit.c_set, wit.skolem), 5000):
        if t and detect_signaling(cur, w):
            seen += 1
            assert validate_local(cur, -1, len(w) + 1, monotone_c=system.monotone_c) == []
    assert seen >= 2
