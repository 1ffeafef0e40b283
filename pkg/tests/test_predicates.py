from __future__ import annotations

import itertools
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigma_ca.guest_machines import PredResult, eval_predicate_direct
from sigma_ca.predicates import (
    FAMILIES,
    builtin_programs,
    default_pred_fuel,
    dump_bundled,
    guest_halting_time,
    load_bundled,
)
from sigma_ca.streams import BitStream, skolem_values, stream_bit_at_pair


def test_bundled_file_matches_the_builders():
    shipped = resources.files("sigma_ca.data").joinpath("predicates.json").read_text()
    assert shipped == dump_bundled()


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_load_bundled(name):
    assert load_bundled(name).to_json() == builtin_programs()[name].to_json()


def test_unknown_bundled_name():
    with pytest.raises(ValueError):
        load_bundled("NOPE")


def _agrees(name: str, mask: int, m: int, ell: int, w: str) -> None:
    fam = FAMILIES[name]
    oracle = lambda i: (mask >> i) & 1  # noqa: E731
    got = eval_predicate_direct(fam.build(), oracle, m, ell, w, default_pred_fuel(m, ell, w))
    assert got is not PredResult.TIMEOUT
    assert (got is PredResult.ACCEPT) == fam.reference(oracle, m, ell, w), (name, mask, m, ell, w)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_programs_match_references_exhaustively(name):
    for n in range(4):
        for w in map("".join, itertools.product("01", repeat=n)):
            for mask in (0, 0b1010, 0b0101, 0b1111):
                for m in range(1, 5):
                    for ell in range(0, 8):
                        _agrees(name, mask, m, ell, w)


@settings(max_examples=150, deadline=None)
@given(
    st.sampled_from(sorted(FAMILIES)),
    st.integers(0, 2**8 - 1),
    st.integers(1, 7),
    st.integers(0, 14),
    st.text("01", max_size=7),
)
def test_programs_match_references(name, mask, m, ell, w):
    _agrees(name, mask, m, ell, w)


def test_guest_halts_exactly_on_words_with_11():
    for n in range(8):
        for w in map("".join, itertools.product("01", repeat=n)):
            t = guest_halting_time(w, 50)
            assert (t is not None) == ("11" in w)
            if t is not None:
                assert t == w.index("11") + 2


@pytest.mark.parametrize("w", ["", "1", "01", "110", "0110"])
def test_canonical_witnesses_accept_every_check(w):
    for name, fam in FAMILIES.items():
        guess = fam.witness(w)
        if guess is None:
            assert not fam.in_language(w)
            continue
        c_set, skolem = map(BitStream, guess)
        ells = skolem_values(skolem, 6)
        for m, ell in enumerate(ells, 1):
            assert fam.reference(c_set.bit, m, ell, w), (name, w, m)


def test_stream_layout():
    c_set = BitStream({"kind": "periodic", "bits": "10"})
    skolem = BitStream({"kind": "skolem-list", "values": [2, 0, 1], "then": 1})
    assert skolem.prefix(7) == "1100101"
    assert skolem_values(skolem, 3) == [2, 0, 1]
    layout = "".join(str(stream_bit_at_pair(c_set, skolem, j)) for j in range(8))
    assert layout == "11011000"  # set 1010 on even pairs, Skolem 1100 on odd
    assert BitStream({"kind": "skolem", "a": 2, "b": 1}).prefix(9) == "111011111"


@pytest.mark.parametrize(
    "desc",
    [{}, {"kind": "const", "bit": 2}, {"kind": "periodic", "bits": ""}, {"kind": "skolem", "a": -1}, {"kind": "x"}],
)
def test_bad_stream_descriptors(desc):
    with pytest.raises(ValueError):
        BitStream(desc)
