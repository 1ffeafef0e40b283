"""Shared helpers: random tape-level machines and their CA embeddings."""

from __future__ import annotations

import random

from sigma_ca.ca_compiler import embed_tm, machine_alphabet
from sigma_ca.core_model import (
    ARROW_LEFT,
    ARROW_RIGHT,
    Configuration,
    ConstantTail,
    Main,
    TrackedCell,
)
from sigma_ca.guest_machines import ANY, KEEP, TMConfig, TMSpec, tm_step
from sigma_ca.simulator import iterate

PAIRS = (Main.P00, Main.P01, Main.P10, Main.P11)
WORKS = (".", "x", "y", "z")


def random_tmspec(rng: random.Random, n_states: int | None = None, n_works: int | None = None) -> TMSpec:
    """A total machine over ``(pair main, work)`` symbols with a signalling start."""
    n_states = n_states or rng.randint(1, 5)
    n_works = n_works or rng.randint(1, 3)
    works = WORKS[:n_works]
    symbols = [(m, w) for m in PAIRS for w in works]
    inner = [f"s{i}" for i in range(n_states)]
    halting = ["h"] if rng.random() < 0.5 else []
    targets = inner + ["q0"] + halting + ["dead"]
    weights = [8] * len(inner) + [2] + [1] * len(halting) + [1]

    def action(next_state: str) -> tuple:
        write = KEEP if rng.random() < 0.2 else rng.choice(symbols)
        return next_state, write, rng.choice("LRS")

    transitions = {("q0", ANY): action(inner[0])}
    for q in inner:
        for s in symbols:
            transitions[(q, s)] = action(rng.choices(targets, weights)[0])
    return TMSpec(
        states=frozenset(inner + ["q0", "dead"] + halting),
        symbols=frozenset(symbols),
        blank=(Main.P00, "."),
        transitions=transitions,
        start="q0",
        dead="dead",
        halting=frozenset(halting),
    )


def random_tape(rng: random.Random, spec: TMSpec, lo: int = -4, hi: int = 4) -> dict:
    symbols = sorted(spec.symbols, key=lambda s: (s[0].value, s[1]))
    return {x: rng.choice(symbols) for x in range(lo, hi + 1)}


def ca_image(alphabet, state: str, head: int, tape: dict, blank, lo: int, hi: int) -> list[int]:
    """Cell indices of a single-head configuration on ``[lo, hi]``."""
    out = []
    for x in range(lo, hi + 1):
        main, work = tape.get(x, blank)
        mark = state if x == head else (ARROW_RIGHT if x < head else ARROW_LEFT)
        out.append(alphabet.index(TrackedCell(main, mark, work)))
    return out


def embedded_config(spec: TMSpec, tape: dict, alphabet=None) -> Configuration:
    alphabet = alphabet or machine_alphabet(spec)
    lo, hi = min(tape, default=0), max(tape, default=0)
    lo, hi = min(lo, 0), max(hi, 0)
    cells = ca_image(alphabet, spec.start, 0, tape, spec.blank, lo, hi)
    bm, bw = spec.blank
    left = ConstantTail(alphabet.index(TrackedCell(bm, ARROW_RIGHT, bw)))
    right = ConstantTail(alphabet.index(TrackedCell(bm, ARROW_LEFT, bw)))
    return Configuration(lo, cells, left, right, alphabet)


def compare_embedding(spec: TMSpec, tape: dict, fuel: int, embedded: TMSpec | None = None) -> list[str]:
    """Run ``spec`` directly and ``embedded`` (default: the same machine) in the CA.

    Returns a description of the first mismatch, if any.
    """
    alphabet = machine_alphabet(spec)
    rule = embed_tm(embedded or spec, alphabet)
    config = embedded_config(spec, tape, alphabet)
    tm = TMConfig(spec.start, 0, tape)
    lo, hi = config.lo, config.hi
    errors = []
    for t, cur in iterate(rule, config, fuel):
        if t > 0:
            tm = tm_step(spec, tm)
        lo, hi = min(lo, tm.head - 1), max(hi, tm.head + 1)
        expect = ca_image(alphabet, tm.state, tm.head, tm.tape, spec.blank, lo, hi)
        got = cur.segment(lo, hi)
        if got != expect:
            bad = next(x for x, (g, e) in enumerate(zip(got, expect), lo) if g != e)
            errors.append(f"t={t}: cell {bad} is {alphabet.cell(cur.cell_at(bad))}, expected "
                          f"{alphabet.cell(expect[bad - lo])}")
            break
    return errors
