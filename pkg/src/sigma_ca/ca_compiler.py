"""Compile a checker machine into a cellular automaton on the structured SFT.

One machine step is one CA step.  The head cell carries the state on the
head track; every cell left of it shows ``>`` and every cell right of it
``<``.  A right move turns the head cell into ``>`` and the ``<`` to its right
into the new head; a left move is the mirror image.  Terminal states freeze.

Spreading: a cell turns into Spread when it or a neighbour at distance one
is Spread, when an adjacent pair containing it is forbidden, or when it holds
the spreading-trigger state.  So Spread grows by exactly one cell per side
per step.  Both layers only read distance one; the rule is still declared
with radius 2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .core_model import (
    ARROW_LEFT,
    ARROW_RIGHT,
    BLANK_WORK,
    CellAlphabet,
    ConstantTail,
    Configuration,
    LocalRule,
    Main,
    ProgramTail,
    Quiescence,
    SPREAD,
    TrackedCell,
    ViolationTable,
    input_bit,
    is_arrow,
)
from .guest_machines import (
    KEEP,
    Q0,
    SPREAD_TRIGGER,
    CheckerVariant,
    IllFormedMachine,
    PredicateProgram,
    TMConfig,
    TMSpec,
    build_checker,
    checker_works,
    tmspec_from_json,
    tmspec_to_json,
)
from .streams import PairTrackProgram

RADIUS = 2
DEFAULT_TABLE_BOUND = 2**20


class PatternWidth(ValueError):
    pass


class TableTooLarge(ValueError):
    def __init__(self, entries: int, bound: int) -> None:
        super().__init__(f"rule table has {entries} neighbourhoods, above the bound {bound}")
        self.entries = entries
        self.bound = bound


# ---------------------------------------------------------------------------
# Embedding


def machine_alphabet(spec: TMSpec, extra_works: Sequence[str] = ()) -> CellAlphabet:
    """Cell table for a machine whose tape symbols are ``(Main, work)`` pairs."""
    works = set(extra_works)
    for sym in spec.symbols:
        if not (isinstance(sym, tuple) and len(sym) == 2 and isinstance(sym[0], Main)):
            raise IllFormedMachine(f"tape symbol {sym!r} is not a (main, work) pair")
        works.add(sym[1])
    return CellAlphabet(sorted(spec.states), sorted(works), spec.start)


@dataclass(frozen=True, eq=False)
class _HeadTables:
    own: list  # output for a cell holding a head, -1 otherwise
    push_right: list  # head-track slot handed to the right neighbour, -1 if none
    push_left: list
    alphabet: CellAlphabet

    def rehead(self, idx: int, slot: int) -> int:
        if idx == 0:
            return 0
        a = self.alphabet
        mi, _ = a.main_head_of(idx)
        return 1 + (mi * a.H + slot) * a.W + (idx - 1) % a.W


def _head_tables(spec: TMSpec, alphabet: CellAlphabet) -> _HeadTables:
    size = alphabet.size
    own = [-1] * size
    push_r = [-1] * size
    push_l = [-1] * size
    own[0] = 0
    slot = {h: i for i, h in enumerate(alphabet.heads)}
    terminal = spec.terminal
    for mi, main in enumerate(alphabet.mains):
        for hi, q in enumerate(alphabet.heads):
            if is_arrow(q):
                continue
            for wi, work in enumerate(alphabet.works):
                idx = 1 + (mi * alphabet.H + hi) * alphabet.W + wi
                t = None if q in terminal else spec.lookup(q, (main, work))
                if t is None:
                    own[idx] = idx
                    continue
                q2, write, mv = t
                m2, w2 = (main, work) if write is KEEP else write
                if mv == "S":
                    own[idx] = alphabet.index(TrackedCell(m2, q2, w2))
                elif mv == "R":
                    own[idx] = alphabet.index(TrackedCell(m2, ARROW_RIGHT, w2))
                    push_r[idx] = slot[q2]
                else:
                    own[idx] = alphabet.index(TrackedCell(m2, ARROW_LEFT, w2))
                    push_l[idx] = slot[q2]
    return _HeadTables(own, push_r, push_l, alphabet)


def embed_tm(checker: TMSpec, alphabet: CellAlphabet | None = None) -> LocalRule:
    """Radius-2 rule simulating ``checker`` one step per CA step (no spreading)."""
    alphabet = alphabet or machine_alphabet(checker)
    tables = _head_tables(checker, alphabet)
    own, push_r, push_l, rehead = tables.own, tables.push_right, tables.push_left, tables.rehead

    def f(nb: tuple) -> int:
        x = nb[2]
        o = own[x]
        if o >= 0:
            return o
        s = push_r[nb[1]]
        if s >= 0:
            return rehead(x, s)
        s = push_l[nb[3]]
        if s >= 0:
            return rehead(x, s)
        return x

    def active(idx: int) -> bool:
        return own[idx] >= 0

    quiet = Quiescence(active, lambda x, y: False)
    return LocalRule(alphabet.size, RADIUS, f, quiescence=quiet, name="embedded-tm")


# ---------------------------------------------------------------------------
# Spreading


@dataclass(frozen=True)
class Pattern:
    """A forbidden pattern: ``test`` sees ``width`` consecutive cell indices."""

    width: int
    test: Callable[[tuple], bool]
    name: str = "pattern"


def add_spreading(rule: LocalRule, forbidden: Sequence[Pattern], spread: int = 0) -> LocalRule:
    """Spread absorbs, grows at speed one, and replaces every forbidden occurrence.

    A cell becomes ``spread`` if a neighbour at distance at most one is
    ``spread`` or if an occurrence of a forbidden pattern covers it inside
    its neighbourhood.
    """
    r = rule.radius
    w = rule.width
    for p in forbidden:
        if not 1 <= p.width <= w:
            raise PatternWidth(f"pattern {p.name} has width {p.width}, rule window is {w}")
    # occurrences covering the centre that fit in the window
    checks = [
        (p.test, start, start + p.width)
        for p in forbidden
        for start in range(max(0, r - p.width + 1), r + 1)
        if start + p.width <= w
    ]
    inner = rule.transition
    near = slice(max(0, r - 1), r + 2)

    def f(nb: tuple) -> int:
        if spread in nb[near]:
            return spread
        for test, a, b in checks:
            if test(nb[a:b]):
                return spread
        return inner(nb)

    base_q = rule.quiescence
    pair_tests = [p.test for p in forbidden if p.width == 2]
    single = [p.test for p in forbidden if p.width == 1]

    def active(x: int) -> bool:
        return x == spread or any(t((x,)) for t in single) or (base_q is not None and base_q.active(x))

    def bad_pair(x: int, y: int) -> bool:
        return any(t((x, y)) for t in pair_tests) or (base_q is not None and base_q.bad_pair(x, y))

    quiet = None
    if base_q is not None and all(p.width <= 2 for p in forbidden):
        quiet = Quiescence(active, bad_pair)
    return LocalRule(rule.alphabet_size, r, f, quiescence=quiet, name=rule.name + "+spread")


def structural_patterns(alphabet: CellAlphabet, monotone_c: bool) -> list[Pattern]:
    """V1-V4 adjacency constraints plus the spreading-trigger head."""
    table = ViolationTable(alphabet, monotone_c)
    trigger = alphabet.heads.index(SPREAD_TRIGGER) if SPREAD_TRIGGER in alphabet.heads else None

    def is_trigger(nb: tuple) -> bool:
        x = nb[0]
        return trigger is not None and x != 0 and alphabet.main_head_of(x)[1] == trigger

    return [
        Pattern(2, lambda nb: table.bad(nb[0], nb[1]), "structure"),
        Pattern(1, is_trigger, "spread-trigger"),
    ]


# ---------------------------------------------------------------------------
# The reduction system


@dataclass(frozen=True, eq=False)
class ReductionSystem:
    alphabet: CellAlphabet
    rule: LocalRule
    checker: TMSpec
    variant: CheckerVariant
    predicate: PredicateProgram
    helper_alphabet: tuple
    metadata: dict = field(default_factory=dict)

    @property
    def monotone_c(self) -> bool:
        return self.variant is CheckerVariant.UNARY

    @property
    def name(self) -> str:
        return f"{self.predicate.name}/{self.variant.value}"

    def head_state(self, idx: int) -> str | None:
        if idx == 0:
            return None
        h = self.alphabet.head_of(idx)
        return None if is_arrow(h) else h


def _memoized(f: Callable[[tuple], int], r: int) -> tuple[Callable[[tuple], int], Callable[[tuple], int]]:
    """Full-width and distance-one evaluators sharing one cache.

    Both layers only read distance one, so the inner triple is the key.
    """
    pad = (0,) * (r - 1)

    class Memo(dict):
        def __missing__(self, key: tuple) -> int:
            v = self[key] = f(pad + key + pad)
            return v

    local = Memo().__getitem__

    def g(nb: tuple) -> int:
        return local(nb[r - 1 : r + 2])

    return g, local


def assemble(
    checker: TMSpec,
    pred: PredicateProgram,
    variant: CheckerVariant,
    metadata: dict | None = None,
) -> ReductionSystem:
    variant = CheckerVariant(variant)
    works = tuple(checker_works(pred))
    alphabet = machine_alphabet(checker, works)
    base = embed_tm(checker, alphabet)
    spread = add_spreading(base, structural_patterns(alphabet, variant is CheckerVariant.UNARY))
    full, local = _memoized(spread.transition, spread.radius)
    rule = LocalRule(
        spread.alphabet_size,
        spread.radius,
        full,
        quiescence=spread.quiescence,
        name=f"reduction[{pred.name}/{variant.value}]",
        reach=1,
        local=local,
    )
    return ReductionSystem(alphabet, rule, checker, variant, pred, works, dict(metadata or {}))


def build_reduction_ca(pred: PredicateProgram, variant: CheckerVariant) -> ReductionSystem:
    variant = CheckerVariant(variant)
    return assemble(build_checker(pred, variant), pred, variant)


# ---------------------------------------------------------------------------
# The reduction map


ZERO = {"kind": "const", "bit": 0}


def phi(
    system: ReductionSystem,
    w: str,
    c_set: dict,
    skolem: dict,
    c: dict | None = None,
) -> Configuration:
    """The configuration for word ``w`` under a guessed set and Skolem stream.

    Window ``[-1, |w|+1]``: the hash cell, the input, Sep and pair 0; the
    pair track continues lazily to the right.  ``c`` describes the initial
    c-track (all zero unless given).
    """
    if any(ch not in "01" for ch in w):
        raise ValueError(f"word {w!r} is not binary")
    a = system.alphabet
    n = len(w)
    cells = [a.index(TrackedCell(Main.HASH, ARROW_RIGHT, BLANK_WORK))]
    for i, ch in enumerate(w):
        cells.append(a.index(TrackedCell(input_bit(int(ch)), Q0 if i == 0 else ARROW_LEFT, BLANK_WORK)))
    cells.append(a.index(TrackedCell(Main.SEP, Q0 if n == 0 else ARROW_LEFT, BLANK_WORK)))
    track = PairTrackProgram(a, c_set, skolem, c or ZERO)
    cells.append(track.cell(0))
    right = ProgramTail(PairTrackProgram(a, c_set, skolem, c or ZERO, start=1))
    left = ConstantTail(a.index(TrackedCell(Main.HASH, ARROW_RIGHT, BLANK_WORK)))
    return Configuration(-1, cells, left, right, a)


def tm_config_from_ca(system: ReductionSystem, config: Configuration, lo: int, hi: int) -> TMConfig:
    """Machine view of a single-head CA configuration (head searched in [lo, hi])."""
    a = system.alphabet
    head = state = None
    for x in range(lo, hi + 1):
        idx = config.cell_at(x)
        if idx and not is_arrow(a.head_of(idx)):
            head, state = x, a.head_of(idx)
            break
    if head is None:
        raise ValueError("no head in the inspected window")

    def background(x: int):
        cell = a.cell(config.cell_at(x))
        if cell is SPREAD:
            raise ValueError(f"Spread at {x}")
        return (cell.main, cell.work)

    return TMConfig(state, head, {}, background)


# ---------------------------------------------------------------------------
# Rule-table export


def export_table(rule: LocalRule, bound: int = DEFAULT_TABLE_BOUND) -> str:
    n, r = rule.alphabet_size, rule.radius
    entries = n ** (2 * r + 1)
    if entries > bound:
        raise TableTooLarge(entries, bound)
    lines = [f"alphabet {n}", f"radius {r}"]
    from itertools import product

    for nb in product(range(n), repeat=2 * r + 1):
        lines.append(" ".join(map(str, nb)) + f" -> {rule.transition(nb)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Compiled artifact


ARTIFACT_FORMAT = "sigma-ca/system"
ARTIFACT_VERSION = 1


def system_to_json(system: ReductionSystem) -> dict:
    return {
        "format": ARTIFACT_FORMAT,
        "version": ARTIFACT_VERSION,
        "variant": system.variant.value,
        "radius": system.rule.radius,
        "alphabet": {**system.alphabet.to_json(), "size": system.alphabet.size},
        "predicate": system.predicate.to_json(),
        "checker": tmspec_to_json(system.checker),
        "metadata": system.metadata,
    }


def dumps_system(system: ReductionSystem) -> str:
    return json.dumps(system_to_json(system), sort_keys=True, separators=(",", ":")) + "\n"


def system_from_json(doc: dict) -> ReductionSystem:
    if doc.get("format") != ARTIFACT_FORMAT:
        raise ValueError("not a compiled system artifact")
    if doc.get("version") != ARTIFACT_VERSION:
        raise ValueError(f"unsupported artifact version {doc.get('version')!r}")
    pred = PredicateProgram.from_json(doc["predicate"])
    pred.validate()
    checker = tmspec_from_json(doc["checker"])
    system = assemble(checker, pred, CheckerVariant.parse(doc["variant"]), doc.get("metadata"))
    stored = CellAlphabet.from_json(doc["alphabet"])
    if stored != system.alphabet:
        raise ValueError("artifact alphabet does not match its checker")
    return system


def rule_description(system: ReductionSystem) -> dict:
    """Executable description used when the explicit table is too large."""
    return {
        "kind": "reduction-ca",
        "alphabet": system.alphabet.size,
        "radius": system.rule.radius,
        "variant": system.variant.value,
        "predicate": system.predicate.name,
        "rebuild": "sigma_ca.ca_compiler.system_from_json(artifact)",
    }


__all__ = [
    "DEFAULT_TABLE_BOUND",
    "Pattern",
    "PatternWidth",
    "RADIUS",
    "ReductionSystem",
    "TableTooLarge",
    "add_spreading",
    "assemble",
    "build_reduction_ca",
    "dumps_system",
    "embed_tm",
    "export_table",
    "machine_alphabet",
    "phi",
    "structural_patterns",
    "system_from_json",
    "system_to_json",
]
