"""Cells of the structured subshift, lazy configurations and local rules.

A cell of the product subshift carries three tracks: a main symbol (``#``,
``|``, an input bit, or a ``(b, c)`` pair), a head mark (an arrow pointing
at the head, or the head itself in some machine state) and a helper symbol.
The spreading symbol is a separate atomic cell with no tracks.

Configurations hold integer cell indices.  A :class:`CellAlphabet` maps
indices to :class:`TrackedCell` values and back; index 0 is always the
spreading symbol.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterator, NamedTuple, Sequence

DEFAULT_EMIT_FUEL = 10**6

ARROW_RIGHT = ">"
ARROW_LEFT = "<"
BLANK_WORK = "."


class GeneratorStuck(RuntimeError):
    """A tail program exceeded its per-emit fuel budget."""


class Main(enum.Enum):
    HASH = "#"
    SEP = "|"
    A0 = "a0"
    A1 = "a1"
    P00 = "p00"
    P01 = "p01"
    P10 = "p10"
    P11 = "p11"

    @property
    def is_input(self) -> bool:
        return self in (Main.A0, Main.A1)

    @property
    def is_pair(self) -> bool:
        return self.value[0] == "p"

    @property
    def a(self) -> int:
        if not self.is_input:
            raise ValueError(f"{self} carries no input bit")
        return int(self.value[1])

    @property
    def b(self) -> int:
        if not self.is_pair:
            raise ValueError(f"{self} carries no b bit")
        return int(self.value[1])

    @property
    def c(self) -> int:
        if not self.is_pair:
            raise ValueError(f"{self} carries no c bit")
        return int(self.value[2])

    def with_c(self, c: int) -> Main:
        return pair(self.b, c)


MAIN_ORDER: tuple[Main, ...] = tuple(Main)


def input_bit(a: int) -> Main:
    return Main.A1 if a else Main.A0


def pair(b: int, c: int) -> Main:
    return Main(f"p{int(b)}{int(c)}")


def is_arrow(head: str) -> bool:
    return head == ARROW_RIGHT or head == ARROW_LEFT


class TrackedCell(NamedTuple):
    main: Main
    head: str
    work: str = BLANK_WORK


class _Spread:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "SPREAD"

    def __reduce__(self):
        return (_Spread, ())


SPREAD = _Spread()


class CellAlphabet:
    """Mixed-radix index table over main x head x work, plus Spread at 0."""

    def __init__(
        self,
        states: Sequence[str],
        works: Sequence[str],
        signal_state: str | None = None,
    ) -> None:
        for s in states:
            if is_arrow(s):
                raise ValueError(f"state name {s!r} collides with an arrow")
        self.mains = MAIN_ORDER
        self.heads: tuple[str, ...] = (ARROW_RIGHT, ARROW_LEFT, *sorted(set(states)))
        works = sorted(set(works))
        if BLANK_WORK not in works:
            works.insert(0, BLANK_WORK)
        self.works: tuple[str, ...] = tuple(works)
        self.signal_state = signal_state
        self._main_pos = {m: i for i, m in enumerate(self.mains)}
        self._head_pos = {h: i for i, h in enumerate(self.heads)}
        self._work_pos = {w: i for i, w in enumerate(self.works)}
        self.H = len(self.heads)
        self.W = len(self.works)
        self.size = 1 + len(self.mains) * self.H * self.W

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CellAlphabet)
            and self.heads == other.heads
            and self.works == other.works
            and self.signal_state == other.signal_state
        )

    def __hash__(self) -> int:
        return hash((self.heads, self.works, self.signal_state))

    def index(self, cell: TrackedCell | _Spread) -> int:
        if cell is SPREAD:
            return 0
        main, head, work = cell
        try:
            mi = self._main_pos[main]
            hi = self._head_pos[head]
            wi = self._work_pos[work]
        except KeyError as exc:
            raise ValueError(f"cell {cell!r} is outside the alphabet") from exc
        return 1 + (mi * self.H + hi) * self.W + wi

    def cell(self, idx: int) -> TrackedCell | _Spread:
        if idx == 0:
            return SPREAD
        if not 0 < idx < self.size:
            raise ValueError(f"cell index {idx} out of range")
        mh, wi = divmod(idx - 1, self.W)
        mi, hi = divmod(mh, self.H)
        return TrackedCell(self.mains[mi], self.heads[hi], self.works[wi])

    # Fast field access on indices; callers must exclude Spread first.
    def main_of(self, idx: int) -> Main:
        return self.mains[(idx - 1) // self.W // self.H]

    def head_of(self, idx: int) -> str:
        return self.heads[(idx - 1) // self.W % self.H]

    def work_of(self, idx: int) -> str:
        return self.works[(idx - 1) % self.W]

    def main_head_of(self, idx: int) -> tuple[int, int]:
        return divmod((idx - 1) // self.W, self.H)

    def to_json(self) -> dict:
        return {
            "states": list(self.heads[2:]),
            "works": list(self.works),
            "signalState": self.signal_state,
        }

    @classmethod
    def from_json(cls, doc: dict) -> CellAlphabet:
        return cls(doc["states"], doc["works"], doc.get("signalState"))


# ---------------------------------------------------------------------------
# Cell descriptors (structured-text form)


def cell_to_json(cell: TrackedCell | _Spread) -> Any:
    if cell is SPREAD:
        return "SPREAD"
    main, head, work = cell
    if main is Main.HASH or main is Main.SEP:
        m: Any = main.value
    elif main.is_input:
        m = {"a": main.a}
    else:
        m = {"b": main.b, "c": main.c}
    h: Any = head if is_arrow(head) else {"q": head}
    return {"main": m, "head": h, "work": work}


def cell_from_json(doc: Any) -> TrackedCell | _Spread:
    if doc == "SPREAD":
        return SPREAD
    if not isinstance(doc, dict) or set(doc) - {"main", "head", "work"}:
        raise ValueError(f"bad cell descriptor: {doc!r}")
    m = doc["main"]
    if m == "#":
        main = Main.HASH
    elif m == "|":
        main = Main.SEP
    elif isinstance(m, dict) and set(m) == {"a"} and m["a"] in (0, 1):
        main = input_bit(m["a"])
    elif isinstance(m, dict) and set(m) == {"b", "c"} and m["b"] in (0, 1) and m["c"] in (0, 1):
        main = pair(m["b"], m["c"])
    else:
        raise ValueError(f"bad main symbol: {m!r}")
    h = doc["head"]
    if isinstance(h, dict):
        if set(h) != {"q"} or not isinstance(h["q"], str):
            raise ValueError(f"bad head mark: {h!r}")
        head = h["q"]
    elif h in (ARROW_RIGHT, ARROW_LEFT):
        head = h
    else:
        raise ValueError(f"bad head mark: {h!r}")
    return TrackedCell(main, head, doc.get("work", BLANK_WORK))


# ---------------------------------------------------------------------------
# Local rules


@dataclass(frozen=True)
class Quiescence:
    """Certificate that a rule is the identity away from activity.

    If no cell within a neighbourhood is ``active`` and no two adjacent cells
    in it form a ``bad_pair``, the rule returns the centre cell unchanged.
    """

    active: Callable[[int], bool]
    bad_pair: Callable[[int, int], bool]


@dataclass(frozen=True, eq=False)
class LocalRule:
    alphabet_size: int
    radius: int
    transition: Callable[[tuple], int]
    quiescence: Quiescence | None = None
    # Optional segment evaluator, same semantics as apply_segment.
    batch: Callable[[Sequence[int]], list[int]] | None = None
    # Optional: offset beyond which a tail is a fixed point of the rule.
    tail_certifier: Callable[[TailGenerator, str], int | None] | None = None
    name: str = "rule"
    # Optional: the rule only reads cells within ``reach`` of the centre, and
    # ``local`` evaluates it on that narrower neighbourhood.
    reach: int | None = None
    local: Callable[[tuple], int] | None = None

    def __call__(self, neighbourhood: tuple) -> int:
        return self.transition(neighbourhood)

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    def apply_segment(self, cells: Sequence[int]) -> list[int]:
        """Outputs for every full neighbourhood inside ``cells``."""
        if self.batch is not None:
            return self.batch(cells)
        w = self.width
        f = self.transition
        return [f(tuple(cells[i : i + w])) for i in range(len(cells) - w + 1)]

    @classmethod
    def from_table(cls, alphabet_size: int, radius: int, table: dict[tuple, int]) -> LocalRule:
        width = 2 * radius + 1
        for k, v in table.items():
            if len(k) != width or not 0 <= v < alphabet_size:
                raise ValueError(f"bad table entry {k} -> {v}")

        def f(nb: tuple) -> int:
            try:
                return table[nb]
            except KeyError:
                raise ValueError(f"rule undefined on {nb}") from None

        return cls(alphabet_size, radius, f, name="table")


def identity_rule(alphabet_size: int, radius: int = 1) -> LocalRule:
    return LocalRule(alphabet_size, radius, lambda nb: nb[radius], name="identity")


def shift_rule(alphabet_size: int) -> LocalRule:
    """Radius-1 left shift: each cell takes its right neighbour's value."""
    return LocalRule(alphabet_size, 1, lambda nb: nb[2], name="shift")


# ---------------------------------------------------------------------------
# Tails


class TailGenerator:
    """Cells of a one-sided tail; offset 0 is the cell next to the window."""

    def at(self, k: int) -> Hashable:
        raise NotImplementedError

    def take(self, n: int) -> list:
        return [self.at(k) for k in range(n)]

    def descriptor(self, encode: Callable[[Any], Any] = lambda c: c) -> dict:
        raise NotImplementedError

    def quiescent_from(self, q: Quiescence, side: str) -> int | None:
        """Offset from which cells are passive and adjacent pairs are not bad."""
        return None

    def shifted(self, d: int) -> TailGenerator:
        """The tail seen from ``d`` cells further out."""
        if d == 0:
            return self
        return ShiftedTail(self, d)


def _pair_in_order(side: str, inner, outer) -> tuple:
    # left tails run leftward, so the outer cell sits on the left
    return (outer, inner) if side == "left" else (inner, outer)


@dataclass(frozen=True)
class ConstantTail(TailGenerator):
    cell: Hashable

    def at(self, k: int) -> Hashable:
        return self.cell

    def descriptor(self, encode=lambda c: c) -> dict:
        return {"kind": "constant", "cell": encode(self.cell)}

    def quiescent_from(self, q: Quiescence, side: str) -> int | None:
        if q.active(self.cell) or q.bad_pair(self.cell, self.cell):
            return None
        return 0

    def shifted(self, d: int) -> TailGenerator:
        return self


@dataclass(frozen=True)
class PeriodicTail(TailGenerator):
    word: tuple

    def __post_init__(self) -> None:
        if not self.word:
            raise ValueError("periodic tail needs a nonempty word")
        object.__setattr__(self, "word", tuple(self.word))

    def at(self, k: int) -> Hashable:
        return self.word[k % len(self.word)]

    def descriptor(self, encode=lambda c: c) -> dict:
        return {"kind": "periodic", "word": [encode(c) for c in self.word]}

    def quiescent_from(self, q: Quiescence, side: str) -> int | None:
        p = len(self.word)
        for k in range(p):
            a, b = self.word[k], self.word[(k + 1) % p]
            if q.active(a) or q.bad_pair(*_pair_in_order(side, a, b)):
                return None
        return 0

    def shifted(self, d: int) -> TailGenerator:
        p = len(self.word)
        d %= p
        return PeriodicTail(self.word[d:] + self.word[:d])


class StreamProgram:
    """A deterministic cell stream.

    ``run()`` yields cells; a ``None`` stands for one internal step with no
    output and counts against the per-emit fuel budget.
    """

    name = "program"

    def run(self) -> Iterator[Any]:
        raise NotImplementedError

    def params(self, encode: Callable[[Any], Any]) -> dict:
        return {}

    def quiescent_from(self, q: Quiescence, side: str) -> int | None:
        return None


class ProgramTail(TailGenerator):
    def __init__(self, program: StreamProgram, fuel: int = DEFAULT_EMIT_FUEL) -> None:
        self.program = program
        self.fuel = fuel
        self._cache: list = []
        self._it = program.run()

    def at(self, k: int) -> Hashable:
        cache = self._cache
        while len(cache) <= k:
            burnt = 0
            for item in self._it:
                if item is not None:
                    cache.append(item)
                    break
                burnt += 1
                if burnt > self.fuel:
                    raise GeneratorStuck(
                        f"{self.program.name}: no output within {self.fuel} steps "
                        f"at offset {len(cache)}"
                    )
            else:
                raise GeneratorStuck(f"{self.program.name}: stream ended at offset {len(cache)}")
        return cache[k]

    def descriptor(self, encode=lambda c: c) -> dict:
        return {"kind": "program", "program": {"name": self.program.name, **self.program.params(encode)}}

    def quiescent_from(self, q: Quiescence, side: str) -> int | None:
        return self.program.quiescent_from(q, side)


class ShiftedTail(TailGenerator):
    def __init__(self, base: TailGenerator, d: int) -> None:
        if isinstance(base, ShiftedTail):
            base, d = base.base, base.d + d
        self.base = base
        self.d = d

    def at(self, k: int) -> Hashable:
        return self.base.at(k + self.d)

    def descriptor(self, encode=lambda c: c) -> dict:
        return {"kind": "shifted", "by": self.d, "base": self.base.descriptor(encode)}

    def quiescent_from(self, q: Quiescence, side: str) -> int | None:
        off = self.base.quiescent_from(q, side)
        return None if off is None else max(0, off - self.d)


class MappedTail(TailGenerator):
    """Image of a tail under one rule application, computed on demand."""

    def __init__(self, base: TailGenerator, rule: LocalRule, side: str) -> None:
        self.base = base
        self.rule = rule
        self.side = side
        self._cache: dict[int, Hashable] = {}

    def at(self, k: int) -> Hashable:
        v = self._cache.get(k)
        if v is None:
            r = self.rule.radius
            # new offset k sits r cells further out than old offset k
            offs = range(k + 2 * r, k - 1, -1) if self.side == "left" else range(k, k + 2 * r + 1)
            v = self.rule.transition(tuple(self.base.at(o) for o in offs))
            self._cache[k] = v
        return v

    def descriptor(self, encode=lambda c: c) -> dict:
        return {"kind": "mapped", "rule": self.rule.name, "base": self.base.descriptor(encode)}


# ---------------------------------------------------------------------------
# Configurations


class Configuration:
    """A point of the full shift: a materialized window plus lazy tails.

    The left tail's offset 0 sits at ``left_anchor`` and runs leftward; the
    right tail's offset 0 sits at ``right_anchor`` and runs rightward.
    """

    def __init__(
        self,
        lo: int,
        cells: Sequence,
        left: TailGenerator,
        right: TailGenerator,
        alphabet: CellAlphabet | None = None,
    ) -> None:
        self._lo = lo
        self._cells = list(cells)
        self.left = left
        self.right = right
        self.left_anchor = lo - 1
        self.right_anchor = lo + len(self._cells)
        self.alphabet = alphabet

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def hi(self) -> int:
        return self._lo + len(self._cells) - 1

    @property
    def window(self) -> tuple[int, int]:
        return self.lo, self.hi

    def cells(self) -> list:
        return list(self._cells)

    def cell_at(self, i: int):
        lo = self._lo
        if i < lo:
            new = [self.left.at(self.left_anchor - p) for p in range(i, lo)]
            self._cells[:0] = new
            self._lo = i
            return new[0]
        k = i - lo
        if k >= len(self._cells):
            start = lo + len(self._cells)
            self._cells.extend(self.right.at(p - self.right_anchor) for p in range(start, i + 1))
        return self._cells[k]

    def widen(self, lo: int, hi: int) -> Configuration:
        self.cell_at(lo)
        self.cell_at(hi)
        return self

    def segment(self, lo: int, hi: int) -> list:
        self.widen(lo, hi)
        return self._cells[lo - self._lo : hi - self._lo + 1]

    def live(self) -> tuple[list, int]:
        """The materialized cells and the position of the first one.

        The list is the configuration's own storage; the simulator mutates it
        in place.
        """
        return self._cells, self._lo

    def copy(self) -> Configuration:
        c = Configuration(self._lo, self._cells, self.left, self.right, self.alphabet)
        c.left_anchor = self.left_anchor
        c.right_anchor = self.right_anchor
        return c

    def detached_tails(self) -> tuple[TailGenerator, TailGenerator]:
        """Tails re-anchored to the current window edges."""
        return (
            self.left.shifted(self.left_anchor - (self._lo - 1)),
            self.right.shifted(self.hi + 1 - self.right_anchor),
        )

    def decoded(self, lo: int, hi: int) -> list:
        if self.alphabet is None:
            raise ValueError("configuration has no alphabet")
        return [self.alphabet.cell(x) for x in self.segment(lo, hi)]

    def __repr__(self) -> str:
        return f"Configuration(lo={self.lo}, hi={self.hi}, left={self.left!r}, right={self.right!r})"


# ---------------------------------------------------------------------------
# Local validity of the structured subshift


class Violation(NamedTuple):
    position: int  # left cell of the offending adjacent pair
    code: str  # V1..V4
    detail: str


_MAIN_NEXT: dict[Main, frozenset[Main]] = {
    Main.HASH: frozenset({Main.HASH, Main.A0, Main.A1, Main.SEP}),
    Main.A0: frozenset({Main.A0, Main.A1, Main.SEP}),
    Main.A1: frozenset({Main.A0, Main.A1, Main.SEP}),
    Main.SEP: frozenset({Main.P00, Main.P01, Main.P10, Main.P11}),
    Main.P00: frozenset({Main.P00, Main.P01, Main.P10, Main.P11}),
    Main.P01: frozenset({Main.P00, Main.P01, Main.P10, Main.P11}),
    Main.P10: frozenset({Main.P00, Main.P01, Main.P10, Main.P11}),
    Main.P11: frozenset({Main.P00, Main.P01, Main.P10, Main.P11}),
}

# head classes: 0 right arrow, 1 left arrow, 2 head
_HEAD_OK = {(0, 0), (0, 2), (2, 1), (1, 1)}


def _head_class(h: str) -> int:
    return 0 if h == ARROW_RIGHT else 1 if h == ARROW_LEFT else 2


def main_violation(left: Main, right: Main, monotone_c: bool = True) -> str | None:
    if right not in _MAIN_NEXT[left]:
        return "V1" if Main.HASH in (left, right) else "V2"
    if monotone_c and left.is_pair and right.is_pair and left.c == 0 and right.c == 1:
        return "V3"
    return None


def head_violation(left: str, right: str) -> str | None:
    if (_head_class(left), _head_class(right)) not in _HEAD_OK:
        return "V4"
    return None


def pair_violation(left, right, monotone_c: bool = True) -> str | None:
    """Code of the constraint the adjacent cells ``left right`` break, if any."""
    if left is SPREAD or right is SPREAD:
        return None
    return main_violation(left.main, right.main, monotone_c) or head_violation(left.head, right.head)


_DETAIL = {
    "V1": "hash context",
    "V2": "main-track order # w | pairs",
    "V3": "c-track (c=0)(c=1)",
    "V4": "arrow/head consistency",
}


def validate_local(
    config: Configuration, lo: int, hi: int, *, monotone_c: bool = True
) -> list[Violation]:
    """Every forbidden adjacent pair with both cells inside ``[lo, hi]``."""
    if config.alphabet is None:
        raise ValueError("configuration has no alphabet")
    cells = config.decoded(lo, hi)
    out = []
    for k in range(len(cells) - 1):
        code = pair_violation(cells[k], cells[k + 1], monotone_c)
        if code:
            out.append(Violation(lo + k, code, _DETAIL[code]))
    return out


class ViolationTable:
    """Index-level forbidden-pair test for one alphabet (fast path)."""

    def __init__(self, alphabet: CellAlphabet, monotone_c: bool = True) -> None:
        self.alphabet = alphabet
        self.monotone_c = monotone_c
        mains = alphabet.mains
        self._main_bad = [
            [main_violation(a, b, monotone_c) is not None for b in mains] for a in mains
        ]
        self._head_cls = [_head_class(h) for h in alphabet.heads]

    def bad(self, x: int, y: int) -> bool:
        if x == 0 or y == 0:
            return False
        a = self.alphabet
        mx, hx = a.main_head_of(x)
        my, hy = a.main_head_of(y)
        if self._main_bad[mx][my]:
            return True
        return (self._head_cls[hx], self._head_cls[hy]) not in _HEAD_OK


# ---------------------------------------------------------------------------
# Structured-text configurations


def tail_to_json(tail: TailGenerator, alphabet: CellAlphabet | None) -> dict:
    enc = (lambda c: cell_to_json(alphabet.cell(c))) if alphabet else (lambda c: c)
    return tail.descriptor(enc)


def config_to_json(config: Configuration) -> dict:
    a = config.alphabet
    enc = (lambda c: cell_to_json(a.cell(c))) if a else (lambda c: c)
    left, right = config.detached_tails()
    return {
        "lo": config.lo,
        "window": [enc(c) for c in config.cells()],
        "leftTail": left.descriptor(enc),
        "rightTail": right.descriptor(enc),
    }


# name -> factory(params, alphabet)
PROGRAM_REGISTRY: dict[str, Callable[[dict, "CellAlphabet | None"], StreamProgram]] = {}


def tail_from_json(
    doc: dict, decode: Callable[[Any], Any], alphabet: CellAlphabet | None = None
) -> TailGenerator:
    kind = doc.get("kind")
    if kind == "constant":
        return ConstantTail(decode(doc["cell"]))
    if kind == "periodic":
        return PeriodicTail(tuple(decode(c) for c in doc["word"]))
    if kind == "shifted":
        return tail_from_json(doc["base"], decode, alphabet).shifted(int(doc["by"]))
    if kind == "program":
        prog = dict(doc["program"])
        name = prog.pop("name")
        try:
            factory = PROGRAM_REGISTRY[name]
        except KeyError:
            raise ValueError(f"unknown stream program {name!r}") from None
        return ProgramTail(factory(prog, alphabet), int(doc.get("fuel", DEFAULT_EMIT_FUEL)))
    raise ValueError(f"bad tail descriptor: {doc!r}")


def config_from_json(doc: dict, alphabet: CellAlphabet | None = None) -> Configuration:
    if alphabet is not None:
        decode = lambda d: alphabet.index(cell_from_json(d))  # noqa: E731
    else:
        decode = lambda d: d  # noqa: E731
    for key in ("window", "leftTail", "rightTail"):
        if key not in doc:
            raise ValueError(f"configuration document lacks {key!r}")
    return Configuration(
        int(doc.get("lo", 0)),
        [decode(c) for c in doc["window"]],
        tail_from_json(doc["leftTail"], decode, alphabet),
        tail_from_json(doc["rightTail"], decode, alphabet),
        alphabet,
    )


__all__ = [
    "ARROW_LEFT",
    "ARROW_RIGHT",
    "BLANK_WORK",
    "CellAlphabet",
    "Configuration",
    "ConstantTail",
    "GeneratorStuck",
    "LocalRule",
    "Main",
    "MappedTail",
    "PeriodicTail",
    "ProgramTail",
    "Quiescence",
    "SPREAD",
    "StreamProgram",
    "TailGenerator",
    "TrackedCell",
    "Violation",
    "ViolationTable",
    "validate_local",
]
