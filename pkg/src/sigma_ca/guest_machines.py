"""Turing machines: the generic model, predicate programs and the checker.

The checker runs on the tape of the structured subshift.  Its tape symbols
are ``(Main, work)`` pairs: it may rewrite the c-bit of a pair cell and the
helper track, and nothing else.  A predicate program is a small one-sided
machine over its own alphabet that the checker hosts on the helper track of
the even pair cells, so that its head cell ``k`` sits on top of the b-bit
that carries ``chi_C(k)``; oracle queries read that bit.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Mapping, NamedTuple

from .core_model import MAIN_ORDER, Main


class IllFormedMachine(ValueError):
    pass


class _Token:
    def __init__(self, name: str) -> None:
        self.name = name

    def __repr__(self) -> str:
        return self.name

    def __reduce__(self):
        return (_token, (self.name,))


def _token(name: str) -> _Token:
    return {"ANY": ANY, "KEEP": KEEP}[name]


ANY = _Token("ANY")  # wildcard read
KEEP = _Token("KEEP")  # write back what was read

MOVES = {"L": -1, "R": 1, "S": 0}

Transition = tuple  # (next_state, write_symbol | KEEP, move)


@dataclass(frozen=True, eq=False)
class TMSpec:
    """Deterministic machine with a partial transition map.

    ``start`` is the signalling state: it has exactly one outgoing transition.
    ``dead`` rejects and halts; ``accept`` and ``halting`` are further terminal
    states.  A read key of :data:`ANY` matches every symbol without an exact
    entry.
    """

    states: frozenset
    symbols: frozenset
    blank: Hashable
    transitions: Mapping[tuple, Transition]
    start: str
    dead: str
    accept: frozenset = frozenset()
    halting: frozenset = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "symbols", frozenset(self.symbols))
        object.__setattr__(self, "accept", frozenset(self.accept))
        object.__setattr__(self, "halting", frozenset(self.halting))
        object.__setattr__(self, "_terminal", self.accept | self.halting | {self.dead})
        self._validate()

    @property
    def terminal(self) -> frozenset:
        return self._terminal

    def _validate(self) -> None:
        if self.start not in self.states or self.dead not in self.states:
            raise IllFormedMachine("start and dead must be states")
        if self.blank not in self.symbols:
            raise IllFormedMachine("blank must be a tape symbol")
        terminal = self.terminal
        if not terminal <= self.states:
            raise IllFormedMachine("terminal states must be states")
        if self.start in terminal:
            raise IllFormedMachine("the signalling state cannot be terminal")
        start_out = 0
        for (q, s), (q2, w, mv) in self.transitions.items():
            if q not in self.states or q2 not in self.states:
                raise IllFormedMachine(f"transition {q}->{q2} names an unknown state")
            if q in terminal:
                raise IllFormedMachine(f"terminal state {q} has a transition")
            if s is not ANY and s not in self.symbols:
                raise IllFormedMachine(f"transition reads unknown symbol {s!r}")
            if w is not KEEP and w not in self.symbols:
                raise IllFormedMachine(f"transition writes unknown symbol {w!r}")
            if mv not in MOVES:
                raise IllFormedMachine(f"bad move {mv!r}")
            start_out += q == self.start
        if start_out != 1:
            raise IllFormedMachine(f"signalling state has {start_out} transitions, expected 1")

    def lookup(self, state: str, symbol: Hashable) -> Transition | None:
        t = self.transitions
        r = t.get((state, symbol))
        if r is None:
            r = t.get((state, ANY))
        return r

    def is_total(self) -> bool:
        """Every non-terminal state has a move on every symbol."""
        terminal = self.terminal
        for q in self.states - terminal:
            if (q, ANY) in self.transitions:
                continue
            if any((q, s) not in self.transitions for s in self.symbols):
                return False
        return True


class TMConfig:
    """State, head position and tape.

    Cells never written read from ``background`` (blank by default), which is
    how the checker sees the infinite b/c tracks.
    """

    __slots__ = ("state", "head", "tape", "background")

    def __init__(
        self,
        state: str,
        head: int = 0,
        tape: dict | None = None,
        background: Callable[[int], Hashable] | None = None,
    ) -> None:
        self.state = state
        self.head = head
        self.tape = dict(tape or {})
        self.background = background

    def read(self, pos: int, blank: Hashable = None) -> Hashable:
        v = self.tape.get(pos)
        if v is None:
            v = self.background(pos) if self.background is not None else blank
        return v

    def copy(self) -> TMConfig:
        return TMConfig(self.state, self.head, self.tape, self.background)

    def __repr__(self) -> str:
        return f"TMConfig(state={self.state!r}, head={self.head}, written={len(self.tape)})"


def _step_in_place(spec: TMSpec, cfg: TMConfig) -> None:
    q = cfg.state
    if q in spec.terminal:
        return
    sym = cfg.read(cfg.head, spec.blank)
    t = spec.lookup(q, sym)
    if t is None:
        raise IllFormedMachine(f"no transition for state {q!r} on {sym!r}")
    q2, w, mv = t
    if w is not KEEP and w != sym:
        cfg.tape[cfg.head] = w
    cfg.head += MOVES[mv]
    cfg.state = q2


def tm_step(spec: TMSpec, cfg: TMConfig) -> TMConfig:
    out = cfg.copy()
    _step_in_place(spec, out)
    return out


class Status(str, enum.Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    RUNNING = "running"


class RunOutcome(NamedTuple):
    status: Status
    config: TMConfig
    steps: int


def tm_run(spec: TMSpec, cfg: TMConfig, fuel: int) -> RunOutcome:
    if fuel < 0:
        raise ValueError("fuel must be >= 0")
    cur = cfg.copy()
    steps = 0
    terminal = spec.terminal
    while steps < fuel and cur.state not in terminal:
        _step_in_place(spec, cur)
        steps += 1
    if cur.state in spec.accept:
        return RunOutcome(Status.ACCEPTED, cur, steps)
    if cur.state in terminal:
        return RunOutcome(Status.REJECTED, cur, steps)
    return RunOutcome(Status.RUNNING, cur, steps)


def tm_iter(spec: TMSpec, cfg: TMConfig) -> Iterator[TMConfig]:
    """Live configuration after each step (mutated in place between yields)."""
    cur = cfg.copy()
    while True:
        _step_in_place(spec, cur)
        yield cur


# ---------------------------------------------------------------------------
# Predicate programs

PRED_REQUIRED = ("^", "0", "1", "|", "_")
_RESERVED_CHARS = set("./:=* ")


class PredResult(str, enum.Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"
    TIMEOUT = "Timeout"


@dataclass(frozen=True, eq=False)
class PredicateProgram:
    """A recursive matrix R(C, m, l, w) as a one-sided machine with an oracle.

    The tape starts as ``^ w | 1^m | 1^l`` followed by blanks ``_`` with the
    head on ``^``.  A query state reads bit ``chi_C(k)`` where ``k`` is the
    head cell and continues in its yes or no state.
    """

    name: str
    alphabet: tuple
    start: str
    transitions: Mapping[tuple, tuple]
    queries: Mapping[str, tuple] = field(default_factory=dict)
    accept: str = "ACCEPT"
    reject: str = "REJECT"

    @property
    def states(self) -> frozenset:
        out = {self.start, self.accept, self.reject}
        for (q, _), (q2, _, _) in self.transitions.items():
            out.update((q, q2))
        for q, (y, n) in self.queries.items():
            out.update((q, y, n))
        return frozenset(out)

    def validate(self) -> None:
        """Region discipline and completeness; raises IllFormedMachine."""
        gamma = set(self.alphabet)
        for s in PRED_REQUIRED:
            if s not in gamma:
                raise IllFormedMachine(f"{self.name}: alphabet lacks {s!r}")
        for s in self.alphabet:
            if not isinstance(s, str) or len(s) != 1 or s in _RESERVED_CHARS:
                raise IllFormedMachine(f"{self.name}: bad tape symbol {s!r}")
        for q in self.states:
            if not q or set(q) & _RESERVED_CHARS or q in ("<", ">"):
                raise IllFormedMachine(f"{self.name}: bad state name {q!r}")
        terminal = {self.accept, self.reject}
        if self.start in terminal and self.transitions:
            raise IllFormedMachine(f"{self.name}: terminal start with transitions")
        for (q, s), (q2, w, mv) in self.transitions.items():
            if q in terminal or q in self.queries:
                raise IllFormedMachine(f"{self.name}: {q} may not have transitions")
            if s not in gamma or w not in gamma or mv not in MOVES:
                raise IllFormedMachine(f"{self.name}: bad transition {(q, s)} -> {(q2, w, mv)}")
            if s == "^" and (w != "^" or mv == "L"):
                raise IllFormedMachine(f"{self.name}: {q} leaves the left end marker")
            if s != "^" and w == "^":
                raise IllFormedMachine(f"{self.name}: {q} writes a left end marker")
        for q, (y, n) in self.queries.items():
            if q in terminal:
                raise IllFormedMachine(f"{self.name}: terminal query state {q}")
        for q in self.states - terminal - set(self.queries):
            missing = [s for s in self.alphabet if (q, s) not in self.transitions]
            if missing:
                raise IllFormedMachine(f"{self.name}: state {q} undefined on {missing}")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "alphabet": list(self.alphabet),
            "start": self.start,
            "accept": self.accept,
            "reject": self.reject,
            "transitions": [
                [q, s, q2, w, mv] for (q, s), (q2, w, mv) in sorted(self.transitions.items())
            ],
            "queries": {q: list(v) for q, v in sorted(self.queries.items())},
        }

    @classmethod
    def from_json(cls, doc: dict) -> PredicateProgram:
        try:
            trans = {}
            for q, s, q2, w, mv in doc["transitions"]:
                if (q, s) in trans:
                    raise IllFormedMachine(f"duplicate transition for {(q, s)}")
                trans[(q, s)] = (q2, w, mv)
            return cls(
                name=doc["name"],
                alphabet=tuple(doc["alphabet"]),
                start=doc["start"],
                transitions=trans,
                queries={q: tuple(v) for q, v in doc.get("queries", {}).items()},
                accept=doc.get("accept", "ACCEPT"),
                reject=doc.get("reject", "REJECT"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, IllFormedMachine):
                raise
            raise IllFormedMachine(f"bad predicate document: {exc}") from exc


def predicate_tape(m: int, ell: int, w: str) -> list[str]:
    return ["^", *w, "|", *("1" * m), "|", *("1" * ell)]


def eval_predicate_direct(
    pred: PredicateProgram,
    c_oracle: Callable[[int], int],
    m: int,
    ell: int,
    w: str,
    fuel: int,
) -> PredResult:
    if fuel < 0:
        raise ValueError("fuel must be >= 0")
    tape = predicate_tape(m, ell, w)
    head = 0
    state = pred.start
    steps = 0
    trans = pred.transitions
    queries = pred.queries
    while True:
        if state == pred.accept:
            return PredResult.ACCEPT
        if state == pred.reject:
            return PredResult.REJECT
        if steps >= fuel:
            return PredResult.TIMEOUT
        steps += 1
        q = queries.get(state)
        if q is not None:
            state = q[0] if c_oracle(head) else q[1]
            continue
        sym = tape[head] if head < len(tape) else "_"
        t = trans.get((state, sym))
        if t is None:
            raise IllFormedMachine(f"{pred.name}: no transition for {state!r} on {sym!r}")
        state, out, mv = t
        if head >= len(tape):
            tape.extend("_" * (head - len(tape) + 1))
        tape[head] = out
        head += MOVES[mv]
        if head < 0:
            raise IllFormedMachine(f"{pred.name}: head left the tape")


# ---------------------------------------------------------------------------
# The checker


class CheckerVariant(str, enum.Enum):
    UNARY = "unary"
    COUNTER = "counter"

    @classmethod
    def parse(cls, text: str) -> CheckerVariant:
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown variant {text!r} (expected unary or counter)") from None


Q0 = "q0"
DEAD = "dead"
SPREAD_TRIGGER = "SPREAD"
NO_G = "."


class Work(NamedTuple):
    """Helper-track contents: predicate symbol plus three flags."""

    g: str = NO_G  # predicate tape symbol on even pairs; "." = unused
    u: int = 0  # consumed Skolem bit (odd pairs)
    M: int = 0  # check cursor (pairs 0..j)
    n: int = 0  # copied input bit / counted cursor pair

    @property
    def name(self) -> str:
        flags = "".join(f for f, v in (("u", self.u), ("M", self.M), ("n", self.n)) if v)
        return self.g + ("/" + flags if flags else "")

    @classmethod
    def parse(cls, name: str) -> Work:
        g, _, flags = name.partition("/")
        return cls(g, int("u" in flags), int("M" in flags), int("n" in flags))


def checker_works(pred: PredicateProgram) -> list[str]:
    gs = [NO_G, *pred.alphabet]
    return [Work(g, u, M, n).name for g in gs for u in (0, 1) for M in (0, 1) for n in (0, 1)]


class _CheckerBuilder:
    def __init__(self, pred: PredicateProgram, variant: CheckerVariant) -> None:
        self.pred = pred
        self.variant = variant
        gs = [NO_G, *pred.alphabet]
        works = [Work(g, u, M, n) for g in gs for u in (0, 1) for M in (0, 1) for n in (0, 1)]
        self.symbols = [(m, w) for m in MAIN_ORDER for w in works]
        self.T: dict[tuple, Transition] = {}
        self.states: set[str] = {Q0, DEAD, SPREAD_TRIGGER}
        self._made: set[str] = set()

    def on(self, state: str, cond, action) -> None:
        self.states.add(state)
        for m, w in self.symbols:
            if cond(m, w):
                nxt, write, mv = action(m, w)
                self.states.add(nxt)
                self.T[(state, (m, w.name))] = (nxt, write, mv)

    @staticmethod
    def put(m: Main, w: Work, c: int | None = None, **flags) -> tuple:
        m2 = m if c is None else m.with_c(c)
        w2 = w._replace(**flags) if flags else w
        if m2 is m and w2 == w:
            return KEEP
        return (m2, w2.name)

    def walk(self, state: str, cond, nxt: str, mv: str) -> None:
        self.on(state, cond, lambda m, w: (nxt, KEEP, mv))

    # -- subroutines ------------------------------------------------------

    def back(self, then: str) -> str:
        """Walk left over pair cells to Sep, then continue in ``then``."""
        name = f"BACK[{then}]"
        if name not in self._made:
            self._made.add(name)
            self.walk(name, lambda m, w: m.is_pair, name, "L")
            self.walk(name, lambda m, w: m is Main.SEP, then, "S")
        return name

    def app(self, sym: str, then: str) -> str:
        """From Sep: write ``sym`` on the first unused even pair, return, continue."""
        name = f"APP[{sym}>{then}]"
        if name not in self._made:
            self._made.add(name)
            even, odd = name + ".e", name + ".o"
            back = self.back(then)
            self.walk(name, lambda m, w: m is Main.SEP, even, "R")
            self.on(even, lambda m, w: m.is_pair and w.g == NO_G, lambda m, w: (back, self.put(m, w, g=sym), "L"))
            self.walk(even, lambda m, w: m.is_pair and w.g != NO_G, odd, "R")
            self.walk(odd, lambda m, w: m.is_pair, even, "R")
        return name

    # -- phases -----------------------------------------------------------

    def build(self) -> TMSpec:
        pair_ = lambda m, w: m.is_pair  # noqa: E731
        inp = lambda m, w: m.is_input  # noqa: E731
        sep = lambda m, w: m is Main.SEP  # noqa: E731
        put = self.put

        self.T[(Q0, ANY)] = ("INIT", KEEP, "S")

        # mark the first check cursor on pair 0
        self.walk("INIT", inp, "INIT", "R")
        self.walk("INIT", sep, "INIT_M", "R")
        build_start = self.app("^", "B_COPY")
        self.on("INIT_M", pair_, lambda m, w: (build_start, put(m, w, M=1), "L"))

        # copy w onto the predicate tape, leftmost uncopied bit first
        self.walk("B_COPY", sep, "B_COPY_L", "L")
        self.walk("B_COPY_L", lambda m, w: m.is_input and not w.n, "B_COPY_L", "L")
        self.walk("B_COPY_L", lambda m, w: m.is_input and w.n, "B_COPY_PICK", "R")
        self.walk("B_COPY_L", lambda m, w: m is Main.HASH, "B_COPY_PICK", "R")
        self.on(
            "B_COPY_PICK",
            lambda m, w: m.is_input and not w.n,
            lambda m, w: (f"B_COPY_GO{m.a}", put(m, w, n=1), "R"),
        )
        self.walk("B_COPY_PICK", sep, self.app("|", "B_M"), "S")
        for a in "01":
            self.walk(f"B_COPY_GO{a}", inp, f"B_COPY_GO{a}", "R")
            self.walk(f"B_COPY_GO{a}", sep, self.app(a, "B_COPY") + ".e", "R")

        # m = number of cursor-marked pairs, in unary
        self.walk("B_M", sep, "B_M_SCAN", "R")
        self.walk("B_M_SCAN", lambda m, w: m.is_pair and w.n, "B_M_SCAN", "R")
        self.on(
            "B_M_SCAN",
            lambda m, w: m.is_pair and not w.n and w.M,
            lambda m, w: (self.back(self.app("1", "B_M")), put(m, w, n=1), "L"),
        )
        self.walk("B_M_SCAN", lambda m, w: m.is_pair and not w.n and not w.M, self.back(self.app("|", "B_L")), "L")

        # l = next unconsumed unary code on the odd pairs
        self.walk("B_L", sep, "B_L_E", "R")
        self.walk("B_L_E", pair_, "B_L_O", "R")
        self.walk("B_L_O", lambda m, w: m.is_pair and w.u, "B_L_E", "R")
        self.on(
            "B_L_O",
            lambda m, w: m.is_pair and not w.u,
            lambda m, w: (
                self.back(self.app("1", "B_L")) if m.b else self.back("B_RUN"),
                put(m, w, u=1),
                "L",
            ),
        )
        self._embed_predicate()

        # erase the predicate tape and the copy flags
        self.walk("CLEAN", sep, "CLEAN_IN_L", "L")
        self.on("CLEAN_IN_L", inp, lambda m, w: ("CLEAN_IN_L", put(m, w, n=0), "L"))
        self.walk("CLEAN_IN_L", lambda m, w: m is Main.HASH, "CLEAN_IN_R", "R")
        self.walk("CLEAN_IN_R", inp, "CLEAN_IN_R", "R")
        self.walk("CLEAN_IN_R", sep, "CLEAN_G_E", "R")
        self.on(
            "CLEAN_G_E",
            lambda m, w: m.is_pair and w.g == NO_G,
            lambda m, w: (self.back("NEXT"), put(m, w, n=0), "L"),
        )
        self.on(
            "CLEAN_G_E",
            lambda m, w: m.is_pair and w.g != NO_G,
            lambda m, w: ("CLEAN_G_O", put(m, w, g=NO_G, n=0), "R"),
        )
        self.on("CLEAN_G_O", pair_, lambda m, w: ("CLEAN_G_E", put(m, w, n=0), "R"))

        # advance the cursor while c_j = 1, else commit
        self.walk("NEXT", sep, "NEXT_SCAN", "R")
        self.walk("NEXT_SCAN", lambda m, w: m.is_pair and w.M, "NEXT_SCAN", "R")
        self.walk("NEXT_SCAN", lambda m, w: m.is_pair and not w.M, "NEXT_AT", "L")
        self.walk("NEXT_AT", lambda m, w: m.is_pair and m.c == 1, "NEXT_ADV", "R")
        self.on("NEXT_ADV", pair_, lambda m, w: (self.back(build_start), put(m, w, M=1), "L"))
        if self.variant is CheckerVariant.UNARY:
            self.on(
                "NEXT_AT",
                lambda m, w: m.is_pair and m.c == 0,
                lambda m, w: (self.back("FIN"), put(m, w, c=1), "L"),
            )
        else:
            self.on("NEXT_AT", lambda m, w: m.is_pair and m.c == 0, lambda m, w: ("CARRY", put(m, w, c=1), "L"))
            self.on("CARRY", pair_, lambda m, w: ("CARRY", put(m, w, c=0), "L"))
            self.walk("CARRY", sep, "FIN", "S")

        # clear cursor and consumed marks, go home, signal
        self.walk("FIN", sep, "FIN_E", "R")
        self.on("FIN_E", pair_, lambda m, w: ("FIN_O", put(m, w, M=0), "R"))
        self.on("FIN_O", lambda m, w: m.is_pair and w.u, lambda m, w: ("FIN_E", put(m, w, u=0, M=0), "R"))
        self.on("FIN_O", lambda m, w: m.is_pair and not w.u, lambda m, w: (self.back("HOME"), put(m, w, M=0), "L"))
        self.walk("HOME", sep, "HOME_L", "L")
        self.walk("HOME_L", inp, "HOME_L", "L")
        self.walk("HOME_L", lambda m, w: m is Main.HASH, Q0, "R")

        # anything unexpected introduces the spreading state
        terminal = {DEAD, SPREAD_TRIGGER}
        for q in sorted(self.states - terminal - {Q0}):
            self.T.setdefault((q, ANY), (SPREAD_TRIGGER, KEEP, "S"))

        symbols = {(m, w.name) for m, w in self.symbols}
        return TMSpec(
            states=frozenset(self.states),
            symbols=frozenset(symbols),
            blank=(Main.P00, NO_G),
            transitions=self.T,
            start=Q0,
            dead=DEAD,
            halting=frozenset({SPREAD_TRIGGER}),
        )

    def _embed_predicate(self) -> None:
        pred = self.pred
        P = lambda s: f"P:{s}"  # noqa: E731
        self.walk("B_RUN", lambda m, w: m is Main.SEP, P(pred.start), "R")
        for (s, gamma), (s2, out, mv) in sorted(pred.transitions.items()):
            def cond(m, w, gamma=gamma):
                return m.is_pair and (w.g == gamma or (gamma == "_" and w.g == NO_G))

            if mv == "S":
                nxt = P(s2)
            else:
                nxt = f"P{mv}:{s2}"
                self.walk(nxt, lambda m, w: m.is_pair, P(s2), mv)
            self.on(P(s), cond, lambda m, w, nxt=nxt, out=out, mv=mv: (nxt, self.put(m, w, g=out), mv))
        for s, (yes, no) in sorted(pred.queries.items()):
            self.on(P(s), lambda m, w: m.is_pair, lambda m, w, y=yes, n=no: (P(y) if m.b else P(n), KEEP, "S"))
        self.walk(P(pred.accept), lambda m, w: m.is_pair, self.back("CLEAN"), "L")
        self.states.add(P(pred.reject))
        self.T[(P(pred.reject), ANY)] = (DEAD, KEEP, "S")


def build_checker(pred: PredicateProgram, variant: CheckerVariant) -> TMSpec:
    """Compose the signalling/checking machine around a predicate program."""
    pred.validate()
    return _CheckerBuilder(pred, CheckerVariant(variant)).build()


# ---------------------------------------------------------------------------
# (De)serialization of tape-level machines


def _sym_to_json(s) -> object:
    if s is ANY:
        return "*"
    if s is KEEP:
        return "="
    if isinstance(s, tuple) and len(s) == 2 and isinstance(s[0], Main):
        return f"{s[0].value}:{s[1]}"
    return s


def _sym_from_json(x):
    if x == "*":
        return ANY
    if x == "=":
        return KEEP
    if isinstance(x, str) and ":" in x:
        m, _, w = x.partition(":")
        return (Main(m), w)
    return x


def tmspec_to_json(spec: TMSpec) -> dict:
    def key(item):
        (q, s), _ = item
        return (q, json.dumps(_sym_to_json(s)))

    return {
        "states": sorted(spec.states),
        "symbols": sorted(json.dumps(_sym_to_json(s)) for s in spec.symbols),
        "blank": _sym_to_json(spec.blank),
        "start": spec.start,
        "dead": spec.dead,
        "accept": sorted(spec.accept),
        "halting": sorted(spec.halting),
        "transitions": [
            [q, _sym_to_json(s), q2, _sym_to_json(w), mv]
            for (q, s), (q2, w, mv) in sorted(spec.transitions.items(), key=key)
        ],
    }


def tmspec_from_json(doc: dict) -> TMSpec:
    return TMSpec(
        states=frozenset(doc["states"]),
        symbols=frozenset(_sym_from_json(json.loads(s)) for s in doc["symbols"]),
        blank=_sym_from_json(doc["blank"]),
        transitions={
            (q, _sym_from_json(s)): (q2, _sym_from_json(w), mv) for q, s, q2, w, mv in doc["transitions"]
        },
        start=doc["start"],
        dead=doc["dead"],
        accept=frozenset(doc.get("accept", ())),
        halting=frozenset(doc.get("halting", ())),
    )


__all__ = [
    "ANY",
    "CheckerVariant",
    "DEAD",
    "IllFormedMachine",
    "KEEP",
    "PredResult",
    "PredicateProgram",
    "Q0",
    "SPREAD_TRIGGER",
    "Status",
    "TMConfig",
    "TMSpec",
    "Work",
    "build_checker",
    "eval_predicate_direct",
    "tm_iter",
    "tm_run",
    "tm_step",
]
