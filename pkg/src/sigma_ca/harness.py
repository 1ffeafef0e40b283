"""Classify words through the compiled automaton and compare with brute force.

A word is classified by simulating its reduction image for a finite number
of steps.  Returning to the signalling cylinder repeatedly is evidence that
the word is in the language; the checker dying or spreading is a refutation
under the guess that was supplied.  Anything else is reported honestly as
undetermined.
"""

from __future__ import annotations

import enum
import itertools
import json
import multiprocessing
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ca_compiler import ReductionSystem, phi
from .guest_machines import DEAD, PredResult, eval_predicate_direct
from .predicates import FAMILIES, default_pred_fuel
from .simulator import TraceReport, find_head, run_trace
from .streams import BitStream

DEFAULT_FUEL = 10**6
DEFAULT_MIN_RECURRENCES = 3
FUEL_ENV = "SIGMA_CA_FUEL"


def default_fuel() -> int:
    text = os.environ.get(FUEL_ENV)
    if text is None:
        return DEFAULT_FUEL
    try:
        fuel = int(text)
    except ValueError:
        raise ValueError(f"{FUEL_ENV} must be an integer, got {text!r}") from None
    if fuel < 0:
        raise ValueError(f"{FUEL_ENV} must be >= 0")
    return fuel


class Verdict(str, enum.Enum):
    RECURRENT = "Recurrent"
    DEAD = "Dead"
    SPREAD = "Spread"
    UNDETERMINED = "Undetermined"


# preference when several guesses are tried
_RANK = {Verdict.RECURRENT: 3, Verdict.UNDETERMINED: 2, Verdict.DEAD: 1, Verdict.SPREAD: 0}


@dataclass(frozen=True)
class Witness:
    """Explicit guess: stream descriptors for the set C, the Skolem stream and c."""

    c_set: dict
    skolem: dict
    c: dict | None = None

    def to_json(self) -> dict:
        doc = {"cSet": self.c_set, "skolem": self.skolem}
        if self.c is not None:
            doc["c"] = self.c
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> Witness:
        if not isinstance(doc, dict) or "cSet" not in doc or "skolem" not in doc:
            raise ValueError("a witness needs 'cSet' and 'skolem' stream descriptors")
        w = cls(doc["cSet"], doc["skolem"], doc.get("c"))
        for d in (w.c_set, w.skolem, w.c):
            if d is not None:
                BitStream(d)  # validates the descriptor
        return w


@dataclass(frozen=True)
class CanonicalWitness:
    """The family's own accepting guess for each word (a fixed fallback otherwise)."""


@dataclass(frozen=True)
class SearchPeriodic:
    """Try every periodic b-track of period <= max_period (c-track zero).

    Bounded and therefore incomplete: a miss proves nothing.
    """

    max_period: int

    def __post_init__(self) -> None:
        if self.max_period < 1:
            raise ValueError("max_period must be >= 1")


Mode = Witness | CanonicalWitness | SearchPeriodic


@dataclass
class Classification:
    verdict: Verdict
    count: int = 0  # returns to the signalling cylinder after time 0
    at_step: int | None = None  # Dead / Spread time
    fuel_used: int = 0
    witness: dict | None = None
    first_events: list[str] = field(default_factory=list)

    def label(self) -> str:
        if self.verdict is Verdict.RECURRENT:
            return f"Recurrent({self.count})"
        if self.verdict in (Verdict.DEAD, Verdict.SPREAD):
            return f"{self.verdict.value}({self.at_step})"
        return self.verdict.value


def fallback_witness(w: str) -> Witness:
    return Witness({"kind": "const", "bit": 0}, {"kind": "skolem", "a": 1, "b": len(w) + 2})


def canonical_witness(system: ReductionSystem, w: str) -> Witness:
    fam = FAMILIES.get(system.predicate.name)
    guess = fam.witness(w) if fam is not None else None
    if guess is None:
        return fallback_witness(w)
    return Witness(*guess)


def _verdict(report: TraceReport, min_recurrences: int, dead_state: str) -> tuple[Verdict, int | None]:
    count = max(0, len(report.signaling_times) - 1)
    if count >= min_recurrences:
        return Verdict.RECURRENT, None
    if report.spread_at is not None:
        return Verdict.SPREAD, report.spread_at
    if report.static_from is not None and report.final is not None:
        head = find_head(report.final)
        if head is not None and head[1] == dead_state:
            return Verdict.DEAD, report.static_from
    return Verdict.UNDETERMINED, None


def run_witness(
    system: ReductionSystem,
    w: str,
    witness: Witness,
    fuel: int,
    min_recurrences: int = DEFAULT_MIN_RECURRENCES,
    exhaust: bool = False,
) -> tuple[Classification, TraceReport]:
    """Simulate phi(w) under one guess.

    By default the run stops as soon as the verdict is settled (the minimum
    number of returns, Spread, or a dead checker); ``exhaust`` spends all fuel.
    """
    config = phi(system, w, witness.c_set, witness.skolem, witness.c)
    report = run_trace(
        system.rule,
        config,
        fuel,
        signal_word=w,
        stop_on_spread=True,
        stop_after_signals=None if exhaust else min_recurrences,
    )
    verdict, at = _verdict(report, min_recurrences, DEAD)
    cls = Classification(
        verdict,
        count=max(0, len(report.signaling_times) - 1),
        at_step=at,
        fuel_used=report.steps if report.static_from is None else report.static_from + 1,
        witness=witness.to_json(),
        first_events=report.event_lines()[:5],
    )
    return cls, report


def periodic_witnesses(max_period: int) -> Iterable[Witness]:
    """Each primitive binary word of length <= max_period as a pair-track b pattern.

    Patterns whose Skolem half is all ones are skipped: the first unary code
    never ends, so such a guess can never complete a pass.
    """
    seen = set()
    for p in range(1, max_period + 1):
        for bits in itertools.product("01", repeat=p):
            word = "".join(bits)
            if any(p % d == 0 and word == word[:d] * (p // d) for d in range(1, p)):
                continue
            unit = word if p % 2 == 0 else word * 2
            key = unit
            if key in seen:
                continue
            seen.add(key)
            if set(unit[1::2]) == {"1"}:
                continue
            yield Witness({"kind": "periodic", "bits": unit[0::2]}, {"kind": "periodic", "bits": unit[1::2]})


def classify_word(
    system: ReductionSystem,
    w: str,
    mode: Mode | None = None,
    fuel: int | None = None,
    min_recurrences: int = DEFAULT_MIN_RECURRENCES,
    exhaust: bool = False,
) -> Classification:
    if any(ch not in "01" for ch in w):
        raise ValueError(f"word {w!r} is not binary")
    if min_recurrences < 1:
        raise ValueError("min_recurrences must be >= 1")
    fuel = default_fuel() if fuel is None else fuel
    mode = mode or CanonicalWitness()
    if isinstance(mode, CanonicalWitness):
        mode = canonical_witness(system, w)
    if isinstance(mode, Witness):
        return run_witness(system, w, mode, fuel, min_recurrences, exhaust)[0]
    if isinstance(mode, SearchPeriodic):
        best = None
        used = 0
        for guess in periodic_witnesses(mode.max_period):
            cls = run_witness(system, w, guess, fuel, min_recurrences, exhaust)[0]
            used += cls.fuel_used
            if best is None or (_RANK[cls.verdict], cls.count) > (_RANK[best.verdict], best.count):
                best = cls
            if best.verdict is Verdict.RECURRENT:
                break
        best.fuel_used = used
        return best
    raise TypeError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Brute force


class Truth(str, enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"


def default_bounds(w: str) -> tuple[int, int, int]:
    m_max = len(w) + 2
    return m_max, m_max + len(w) + 2, len(w)


def brute_force_oracle(family: str, w: str, bounds: tuple[int, int, int] | None = None) -> Truth:
    """Bounded search for ``(exists C)(forall m)(exists l) R(C, m, l, w)``.

    C ranges over subsets of ``[0, c_max)``, m over ``1..m_max`` and l over
    ``0..l_max``; each instance runs the predicate program directly.  The
    answer is Unknown unless the family's known structure makes those bounds
    conclusive.
    """
    try:
        fam = FAMILIES[family]
    except KeyError:
        raise KeyError(f"unknown family {family!r}; bundled: {', '.join(sorted(FAMILIES))}") from None
    m_max, l_max, c_max = bounds or default_bounds(w)
    if min(m_max, l_max, c_max) < 0:
        raise ValueError("bounds must be non-negative")
    prog = fam.build()

    def holds(mask: int) -> bool:
        oracle = lambda i: (mask >> i) & 1 if i < c_max else 0  # noqa: E731
        for m in range(1, m_max + 1):
            if not any(
                eval_predicate_direct(prog, oracle, m, ell, w, default_pred_fuel(m, ell, w)) is PredResult.ACCEPT
                for ell in range(l_max + 1)
            ):
                return False
        return True

    found = any(holds(mask) for mask in range(1 << c_max))
    if not fam.sufficient(w, m_max, l_max, c_max):
        return Truth.UNKNOWN
    return Truth.TRUE if found else Truth.FALSE


# ---------------------------------------------------------------------------
# Batch runs


@dataclass
class Row:
    word: str
    classification: Classification
    oracle: Truth | None
    agree: bool | None

    def record(self) -> dict:
        c = self.classification
        return {
            "word": self.word,
            "verdict": c.verdict.value,
            "count": c.count,
            "atStep": c.at_step,
            "fuelUsed": c.fuel_used,
            "firstEvents": c.first_events,
            "oracle": None if self.oracle is None else self.oracle.value,
            "agree": self.agree,
        }


@dataclass
class LanguageReport:
    system: str
    rows: list[Row]

    @property
    def all_agree(self) -> bool:
        return all(r.agree is not False for r in self.rows)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.rows:
            out[r.classification.verdict.value] = out.get(r.classification.verdict.value, 0) + 1
        return out

    def table(self) -> str:
        head = ("word", "verdict", "fuel", "oracle", "agree")
        body = [
            (
                repr(r.word),
                r.classification.label(),
                str(r.classification.fuel_used),
                "-" if r.oracle is None else r.oracle.value,
                "-" if r.agree is None else ("yes" if r.agree else "NO"),
            )
            for r in self.rows
        ]
        widths = [max(len(x) for x in col) for col in zip(head, *body)] if body else [len(h) for h in head]
        fmt = lambda row: "  ".join(x.ljust(n) for x, n in zip(row, widths)).rstrip()  # noqa: E731
        lines = [f"# {self.system}", fmt(head), fmt(tuple("-" * n for n in widths))]
        lines += [fmt(row) for row in body]
        agree = sum(r.agree is True for r in self.rows)
        checked = sum(r.agree is not None for r in self.rows)
        lines.append(f"# {len(self.rows)} words, {agree}/{checked} agree with the oracle")
        return "\n".join(lines) + "\n"

    def jsonl(self) -> str:
        return "".join(json.dumps(r.record(), sort_keys=True) + "\n" for r in self.rows)


def agrees(verdict: Verdict, truth: Truth | None) -> bool | None:
    if truth is None or truth is Truth.UNKNOWN:
        return None
    if truth is Truth.TRUE:
        return verdict is Verdict.RECURRENT
    return verdict in (Verdict.DEAD, Verdict.SPREAD)


_WORKER: tuple | None = None


def _classify_one(w: str) -> tuple[str, Classification, Truth | None]:
    system, mode, fuel, min_rec, with_oracle = _WORKER
    cls = classify_word(system, w, mode, fuel, min_rec)
    truth = brute_force_oracle(system.predicate.name, w) if with_oracle else None
    return w, cls, truth


def sample_language(
    system: ReductionSystem,
    words: Sequence[str],
    mode: Mode | None = None,
    fuel: int | None = None,
    min_recurrences: int = DEFAULT_MIN_RECURRENCES,
    jobs: int = 1,
) -> LanguageReport:
    """Classify every word; bundled families also get the brute-force column.

    With ``jobs > 1`` words are spread over forked worker processes; rows
    keep the input order.
    """
    global _WORKER
    fuel = default_fuel() if fuel is None else fuel
    with_oracle = system.predicate.name in FAMILIES
    _WORKER = (system, mode, fuel, min_recurrences, with_oracle)
    try:
        if jobs > 1 and len(words) > 1 and "fork" in multiprocessing.get_all_start_methods():
            with multiprocessing.get_context("fork").Pool(jobs) as pool:
                results = pool.map(_classify_one, list(words))
        else:
            results = [_classify_one(w) for w in words]
    finally:
        _WORKER = None
    rows = [Row(w, cls, truth, agrees(cls.verdict, truth)) for w, cls, truth in results]
    return LanguageReport(system.name, rows)


def words_up_to(n: int) -> list[str]:
    return ["".join(p) for k in range(n + 1) for p in itertools.product("01", repeat=k)]


__all__ = [
    "CanonicalWitness",
    "Classification",
    "DEFAULT_FUEL",
    "DEFAULT_MIN_RECURRENCES",
    "LanguageReport",
    "SearchPeriodic",
    "Truth",
    "Verdict",
    "Witness",
    "brute_force_oracle",
    "canonical_witness",
    "classify_word",
    "default_fuel",
    "run_witness",
    "sample_language",
    "words_up_to",
]
