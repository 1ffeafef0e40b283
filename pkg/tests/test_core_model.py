from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigma_ca.ca_compiler import phi
from sigma_ca.core_model import (
    ARROW_LEFT,
    ARROW_RIGHT,
    BLANK_WORK,
    SPREAD,
    CellAlphabet,
    Configuration,
    ConstantTail,
    GeneratorStuck,
    LocalRule,
    Main,
    PeriodicTail,
    ProgramTail,
    StreamProgram,
    TrackedCell,
    cell_from_json,
    cell_to_json,
    config_from_json,
    config_to_json,
    pair,
    validate_local,
)
from sigma_ca.streams import BitStream, PairTrackProgram

ALPHA = CellAlphabet(["q0", "s", "dead"], [".", "x"], "q0")
HASH_R = TrackedCell(Main.HASH, ARROW_RIGHT, BLANK_WORK)


def cell(main, head=ARROW_LEFT, work=BLANK_WORK) -> int:
    return ALPHA.index(TrackedCell(main, head, work))


def pair_cells(bits: str, c_bits: str) -> list[int]:
    return [cell(pair(int(b), int(c))) for b, c in zip(bits, c_bits)]


def config(cells, lo=0) -> Configuration:
    return Configuration(lo, cells, ConstantTail(ALPHA.index(HASH_R)), ConstantTail(cell(Main.P00)), ALPHA)


# -- alphabet -----------------------------------------------------------------


def test_spread_has_index_zero():
    assert ALPHA.index(SPREAD) == 0
    assert ALPHA.cell(0) is SPREAD


def test_alphabet_is_a_bijection():
    seen = {ALPHA.index(ALPHA.cell(i)) for i in range(ALPHA.size)}
    assert seen == set(range(ALPHA.size))
    assert ALPHA.size == 1 + 8 * (2 + 3) * 2


def test_alphabet_rejects_foreign_cells():
    with pytest.raises(ValueError):
        ALPHA.index(TrackedCell(Main.SEP, "nope", BLANK_WORK))
    with pytest.raises(ValueError):
        ALPHA.cell(ALPHA.size)
    with pytest.raises(ValueError):
        CellAlphabet([">"], ["."])


def test_main_symbol_fields():
    assert [m.value for m in Main] == ["#", "|", "a0", "a1", "p00", "p01", "p10", "p11"]
    assert Main.A1.a == 1 and Main.P10.b == 1 and Main.P10.c == 0
    assert Main.P10.with_c(1) is Main.P11
    with pytest.raises(ValueError):
        Main.HASH.b


# -- cell_at ------------------------------------------------------------------


def test_constant_tail_query_left_of_window():
    cfg = config([cell(Main.SEP)], lo=0)
    assert ALPHA.cell(cfg.cell_at(-5)) == HASH_R
    assert cfg.window == (-5, 0)


def test_query_inside_window_leaves_it_unchanged():
    cfg = config([cell(Main.A0), cell(Main.SEP)], lo=3)
    assert cfg.cell_at(4) == cell(Main.SEP)
    assert cfg.window == (3, 4)


def test_periodic_tail_repeats_its_word():
    word = ("a", "b", "c")
    cfg = Configuration(0, ["x"], ConstantTail("l"), PeriodicTail(word))
    assert [cfg.cell_at(1 + k) for k in range(9)] == [word[k % 3] for k in range(9)]


def test_left_periodic_tail_runs_leftward():
    cfg = Configuration(0, ["x"], PeriodicTail(("a", "b")), ConstantTail("r"))
    assert [cfg.cell_at(-1 - k) for k in range(4)] == ["a", "b", "a", "b"]


class _Silent(StreamProgram):
    name = "silent"

    def run(self):
        while True:
            yield None


def test_generator_stuck_is_reported():
    cfg = Configuration(0, ["x"], ConstantTail("l"), ProgramTail(_Silent(), fuel=50))
    with pytest.raises(GeneratorStuck):
        cfg.cell_at(1)
    with pytest.raises(GeneratorStuck):
        BitStream({"kind": "stall"}, fuel=10).bit(0)


tail_words = st.lists(st.integers(0, 5), min_size=1, max_size=4).map(tuple)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(0, 5), min_size=1, max_size=6),
    tail_words,
    tail_words,
    st.lists(st.integers(-25, 30), min_size=1, max_size=40),
)
def test_laziness_coherence(window, left, right, queries):
    fresh = lambda: Configuration(0, window, PeriodicTail(left), PeriodicTail(right))  # noqa: E731
    cfg = fresh()
    first = {}
    for x in queries:
        v = cfg.cell_at(x)
        assert first.setdefault(x, v) == v
    # every observed cell agrees with an independent, ordered materialization
    ref = fresh()
    for x in sorted(first):
        assert ref.cell_at(x) == first[x]
    # widening never changed an observed cell
    for x, v in first.items():
        assert cfg.cell_at(x) == v


@settings(max_examples=30, deadline=None)
@given(st.text("01", min_size=1, max_size=6), st.text("01", min_size=1, max_size=4), st.lists(st.integers(-3, 40)))
def test_laziness_coherence_for_pair_track_programs(bits, cset, queries):
    prog = lambda: PairTrackProgram(  # noqa: E731
        ALPHA, {"kind": "periodic", "bits": cset}, {"kind": "prefix", "bits": bits, "then": 1}
    )
    cfg = Configuration(0, [cell(Main.SEP)], ConstantTail(ALPHA.index(HASH_R)), ProgramTail(prog()))
    seen = {x: cfg.cell_at(x) for x in queries}
    ref = prog()
    for x, v in seen.items():
        if x > 0:
            assert v == ref.cell(x - 1)
        assert cfg.cell_at(x) == v


# -- validate_local ---------------------------------------------------------------


def test_phi_window_is_locally_valid(parity):
    cfg = phi(parity, "01", {"kind": "const", "bit": 0}, {"kind": "skolem"})
    assert validate_local(cfg, -1, 3) == []
    assert validate_local(cfg, -6, 20) == []


def test_v3_pattern_is_reported_at_its_position():
    cells = [cell(Main.SEP)] + pair_cells("10", "01")
    cells[0] = ALPHA.index(TrackedCell(Main.SEP, "q0", BLANK_WORK))
    found = validate_local(config(cells, lo=4), 4, 6)
    assert [(v.position, v.code) for v in found] == [(5, "V3")]


def test_two_heads_violate_v4():
    cells = [cell(Main.SEP, "q0")] + pair_cells("00", "00")
    cells[2] = cell(Main.P00, "s")
    codes = {v.code for v in validate_local(config(cells), 0, 2)}
    assert codes == {"V4"}


def test_hash_and_order_violations():
    # a hash after an input bit breaks V1, an input bit among pairs breaks V2
    cells = [cell(Main.A0, "q0"), cell(Main.HASH), cell(Main.SEP), cell(Main.P00), cell(Main.A1)]
    found = [(v.position, v.code) for v in validate_local(config(cells), 0, 4)]
    assert (0, "V1") in found and (3, "V2") in found


def test_arrows_must_point_at_the_head():
    cells = [cell(Main.HASH, ARROW_LEFT), cell(Main.HASH, ARROW_RIGHT)]
    assert [v.code for v in validate_local(config(cells), 0, 1)] == ["V4"]


def test_spread_cells_are_exempt():
    cells = [cell(Main.A0, "q0"), 0, cell(Main.HASH, "s")]
    assert validate_local(config(cells), 0, 2) == []


def test_v3_only_checked_for_monotone_tracks():
    cells = [cell(Main.SEP, "q0")] + pair_cells("00", "01")
    assert validate_local(config(cells), 0, 2, monotone_c=False) == []


def _nonincreasing(bits) -> bool:
    return all(a >= b for a, b in zip(bits, bits[1:]))


@pytest.mark.parametrize("period", [1, 2, 3, 4])
def test_v3_soundness_on_periodic_tracks(period):
    """No V3 anywhere iff the c-track is non-increasing (1^k 0^inf or 1^inf)."""
    for word in itertools.product("01", repeat=period):
        for prefix in ("", "1", "11", "0", "10", "110"):
            # left of the prefix the track is all ones, right of it periodic
            track = "1" * 8 + prefix + "".join(word) * (16 // period + 2)
            cells = [cell(Main.SEP, "q0")] + pair_cells("0" * len(track), track)
            lefts = PeriodicTail((cell(pair(0, 1)),))
            right = PeriodicTail(tuple(pair_cells("0" * period, "".join(word))))
            cfg = Configuration(0, cells[1:], lefts, right, ALPHA)
            violations = validate_local(cfg, -4, len(track) + 2 * period + 4)
            assert (violations == []) == _nonincreasing([int(b) for b in track]), (prefix, word)


# -- structured text ----------------------------------------------------------------


def test_cell_descriptors_round_trip():
    for idx in range(ALPHA.size):
        c = ALPHA.cell(idx)
        assert cell_from_json(cell_to_json(c)) == c
    assert cell_to_json(TrackedCell(pair(1, 0), "q0", ".")) == {
        "main": {"b": 1, "c": 0},
        "head": {"q": "q0"},
        "work": ".",
    }
    assert cell_to_json(SPREAD) == "SPREAD"


@pytest.mark.parametrize(
    "doc",
    [
        {"main": "?", "head": ">", "work": "."},
        {"main": {"a": 2}, "head": ">", "work": "."},
        {"main": "#", "head": "^", "work": "."},
        {"main": "#", "head": {"q": 3}, "work": "."},
        {"main": "#", "head": ">", "extra": 1},
        17,
    ],
)
def test_bad_cell_descriptors(doc):
    with pytest.raises(ValueError):
        cell_from_json(doc)


def test_configuration_documents_round_trip(parity):
    cfg = phi(parity, "10", {"kind": "periodic", "bits": "01"}, {"kind": "skolem", "a": 2, "b": 1})
    doc = config_to_json(cfg)
    assert doc["window"][0] == {"main": "#", "head": ">", "work": "."}
    back = config_from_json(doc, parity.alphabet)
    assert back.segment(-10, 40) == cfg.copy().segment(-10, 40)
    with pytest.raises(ValueError):
        config_from_json({"window": []}, parity.alphabet)


# -- local rules ---------------------------------------------------------------------


def test_rule_from_table_is_total_on_its_table():
    table = {nb: sum(nb) % 2 for nb in itertools.product((0, 1), repeat=3)}
    rule = LocalRule.from_table(2, 1, table)
    assert rule((1, 1, 0)) == 0 and rule.width == 3
    assert rule.apply_segment([0, 1, 1, 1]) == [0, 1]
    with pytest.raises(ValueError):
        LocalRule.from_table(2, 1, {(0, 0): 0})
    partial = LocalRule.from_table(2, 1, {(0, 0, 0): 0})
    with pytest.raises(ValueError):
        partial((1, 1, 1))
