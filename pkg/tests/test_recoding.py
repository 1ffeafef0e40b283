from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigma_ca.core_model import Configuration, ConstantTail, LocalRule, PeriodicTail, shift_rule
from sigma_ca.recoding import (
    DecodeError,
    SubstitutionCode,
    decode_config,
    decode_window,
    encode_config,
    encode_tail,
    recode_binary,
    sync_violations,
    sync_violations_bruteforce,
)
from sigma_ca.simulator import step


def bits(s: str) -> tuple[int, ...]:
    return tuple(int(b) for b in s)


def test_two_symbol_code():
    code = SubstitutionCode(2)
    assert (code.k, code.L) == (1, 6)
    assert code.codeword(0) == bits("111000")
    assert code.codeword(1) == bits("111010")
    assert sync_violations_bruteforce(code) == []
    assert sync_violations(code) == []


@pytest.mark.parametrize("n", [2, 3, 5, 8, 17, 40])
def test_exact_sync_check_matches_enumeration(n):
    code = SubstitutionCode(n)
    assert sync_violations(code) == sync_violations_bruteforce(code) == []
    assert all(code.codeword(s)[:4] == bits("1110") for s in range(n))
    assert all(len(code.codeword(s)) == code.L == 4 + 2 * code.k for s in range(n))


class _LeakyCode(SubstitutionCode):
    """Drops the final separator so a trailing 1 can meet the next sync."""

    def codeword(self, s):
        cw = super().codeword(s)
        return cw[:-1] + (1,) if s % 2 else cw

    def codeword_matrix(self):
        m = super().codeword_matrix().copy()
        m[1::2, -1] = 1
        return m


def test_sync_check_finds_boundary_occurrences():
    code = _LeakyCode(4)
    assert sync_violations_bruteforce(code)
    assert sync_violations(code)


def test_large_code_is_sync_safe():
    code = SubstitutionCode(47105)
    assert (code.k, code.L) == (16, 36)
    assert sync_violations(code) == []


def test_codewords_are_injective_and_never_all_zero():
    code = SubstitutionCode(300)
    words = {code.codeword(s) for s in range(300)}
    assert len(words) == 300
    assert all(any(w) for w in words)
    assert np.array_equal(code.codeword_matrix()[123], np.array(code.codeword(123)))
    with pytest.raises(ValueError):
        code.codeword(300)
    with pytest.raises(ValueError):
        SubstitutionCode(1)


@given(st.integers(2, 500), st.data())
def test_decode_window_round_trip(n, data):
    code = SubstitutionCode(n)
    cells = data.draw(st.lists(st.integers(0, n - 1), min_size=5, max_size=5))
    stream = [b for c in cells for b in code.codeword(c)]
    lead = data.draw(st.lists(st.just(0), max_size=3))
    assert decode_window(lead + stream, code) == cells


def test_decode_errors():
    code = SubstitutionCode(4)
    good = list(code.codeword(1) + code.codeword(2))
    corrupt = list(good)
    corrupt[5] = 1  # a separator bit
    with pytest.raises(DecodeError):
        decode_window(corrupt, code)
    with pytest.raises(DecodeError):
        decode_window([0] * 20, code)
    with pytest.raises(DecodeError):
        decode_window(good[:6], code)
    assert SubstitutionCode(3).decode(bits("11101010")) is None  # index 3 is outside the alphabet


def test_periodic_tail_period_is_multiplied():
    code = SubstitutionCode(5)
    for word in [(1,), (2, 4), (0, 1, 3)]:
        tail = encode_tail(PeriodicTail(word), code, "right")
        assert isinstance(tail, PeriodicTail) and len(tail.word) == len(word) * code.L
        cfg = Configuration(0, [1], ConstantTail(0), PeriodicTail(word))
        enc = encode_config(cfg, code)
        expect = [b for k in range(4) for b in code.codeword(word[k % len(word)])]
        assert enc.segment(code.L, 5 * code.L - 1) == expect


def test_left_tails_encode_in_reading_order():
    code = SubstitutionCode(5)
    cfg = Configuration(0, [1], PeriodicTail((2, 3)), ConstantTail(4))
    enc = encode_config(cfg, code)
    assert decode_config(enc, code, -4, 1) == [3, 2, 3, 2, 1, 4]


def test_all_zero_is_fixed():
    rule, code = recode_binary(shift_rule(3))
    zeros = Configuration(0, [0] * 50, ConstantTail(0), ConstantTail(0))
    assert step(rule, zeros).segment(-10, 60) == [0] * 71


def test_binary_radius():
    rule, code = recode_binary(shift_rule(3))
    assert rule.radius == code.L * 2 and rule.alphabet_size == 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=0, max_size=120), st.integers(2, 9))
def test_batch_matches_the_local_rule(stream, n):
    base = LocalRule(n, 1, lambda nb: (nb[0] + 2 * nb[1] + nb[2]) % n, name="mix")
    rule, code = recode_binary(base)
    rng = random.Random(len(stream) * 31 + n)
    # mix raw noise with genuine codewords so that both paths are exercised
    cells = [rng.randrange(n) for _ in range(8)]
    stream = stream + [b for c in cells for b in code.codeword(c)] + stream[::-1]
    w = rule.width
    slow = [rule.transition(tuple(stream[i : i + w])) for i in range(len(stream) - w + 1)]
    assert rule.batch(stream) == slow


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=12), st.integers(0, 6), st.integers(0, 6))
def test_conjugacy_for_a_toy_rule(cells, left, right):
    base = LocalRule(7, 1, lambda nb: (nb[0] * 3 + nb[1] + 5 * nb[2]) % 7, name="affine")
    rule, code = recode_binary(base)
    cfg = Configuration(0, cells, ConstantTail(left), ConstantTail(right))
    want = step(base, cfg)
    got = step(rule, encode_config(cfg, code))
    lo, hi = want.window
    assert decode_config(got, code, lo - 2, hi + 2) == want.segment(lo - 2, hi + 2)


def test_misaligned_bits_turn_into_zero():
    rule, code = recode_binary(shift_rule(3))
    stream = [0] * (3 * code.L) + list(code.codeword(2)) + [0] * (3 * code.L)
    out = rule.batch(stream)
    assert not any(out)
