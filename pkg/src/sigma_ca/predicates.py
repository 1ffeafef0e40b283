"""Bundled predicate programs and their Python reference semantics.

Every program reads the tape ``^ w | 1^m | 1^l`` described in
:class:`~sigma_ca.guest_machines.PredicateProgram`.  The three non-trivial
families compare ``l >= m`` first with marks ``x`` (m-region) and ``y``
(l-region), so a large enough Skolem value always clears that hurdle and the
family's language is decided by the remaining clause:

* PARITY: ``w`` has an even number of ones.
* MEMBER: ``m >= |w|`` or ``chi_C(m) = w[m]`` (C = bits of w works).
* HALT-SEARCH: the built-in guest halts on ``w`` within ``l`` steps.  The
  guest halts exactly on words containing ``11``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Callable

from .guest_machines import IllFormedMachine, PredicateProgram

ACCEPT = "ACCEPT"
REJECT = "REJECT"


class _Prog:
    """Transition-table builder; missing entries default to REJECT in place."""

    def __init__(self, name: str, extra: str) -> None:
        self.name = name
        self.alphabet = ("^", "0", "1", "|", "_", *extra)
        self.T: dict[tuple, tuple] = {}
        self.Q: dict[str, tuple] = {}
        self.states: set[str] = set()

    def on(self, state: str, syms: str, nxt: str, move: str, write: str | None = None) -> None:
        self.states.add(state)
        for s in syms:
            self.T[(state, s)] = (nxt, s if write is None else write, move)

    def query(self, state: str, yes: str, no: str) -> None:
        self.Q[state] = (yes, no)

    def done(self, start: str = "s") -> PredicateProgram:
        for q in self.states:
            for s in self.alphabet:
                self.T.setdefault((q, s), (REJECT, s, "S"))
        prog = PredicateProgram(self.name, self.alphabet, start, dict(self.T), dict(self.Q), ACCEPT, REJECT)
        prog.validate()
        return prog


def _compare(p: _Prog, tag: str, on_success: str) -> str:
    """States checking l >= m; entered just right of the first ``|``.

    Leaves the m-region all ``x`` and the first m ones of the l-region ``y``;
    continues in ``on_success`` with the head on the second ``|``.
    """
    F, G, H, K, K2 = (f"{n}{tag}" for n in ("F", "G", "H", "K", "K2"))
    p.on(F, "x", F, "R")
    p.on(F, "1", G, "R", "x")
    p.on(F, "|", on_success, "S")
    p.on(G, "1", G, "R")
    p.on(G, "|", H, "R")
    p.on(H, "y", H, "R")
    p.on(H, "1", K, "L", "y")
    p.on(H, "_", REJECT, "S")
    p.on(K, "1y", K, "L")
    p.on(K, "|", K2, "L")
    p.on(K2, "1x", K2, "L")
    p.on(K2, "|", F, "R")
    return F


def always_accept() -> PredicateProgram:
    p = _Prog("ALWAYS-ACCEPT", "")
    p.on("s", "".join(p.alphabet), ACCEPT, "S")
    return p.done()


def always_reject() -> PredicateProgram:
    p = _Prog("ALWAYS-REJECT", "")
    p.on("s", "".join(p.alphabet), REJECT, "S")
    return p.done()


def parity() -> PredicateProgram:
    p = _Prog("PARITY", "xy")
    p.on("s", "^", "Ee", "R")
    p.on("Ee", "0", "Ee", "R")
    p.on("Ee", "1", "Eo", "R")
    p.on("Eo", "0", "Eo", "R")
    p.on("Eo", "1", "Ee", "R")
    for par, verdict in (("e", ACCEPT), ("o", REJECT)):
        p.on(f"E{par}", "|", _compare(p, par, verdict), "R")
    return p.done()


def member() -> PredicateProgram:
    p = _Prog("MEMBER", "xyzab")
    p.on("s", "^", "W", "R")
    p.on("W", "01", "W", "R")
    p.on("W", "|", _compare(p, "", "XL0"), "R")
    # turn each x back into z while marking one more w bit
    p.on("XL0", "|", "XL", "L")
    p.on("XL", "xz1", "XL", "L")
    p.on("XL", "|", "XF", "R")
    p.on("XF", "z", "XF", "R")
    p.on("XF", "x", "WL", "L", "z")
    p.on("XF", "|", "FIND", "L")
    p.on("WL", "z", "WL", "L")
    p.on("WL", "|", "WL2", "L")
    p.on("WL2", "01ab", "WL2", "L")
    p.on("WL2", "^", "WM", "R")
    p.on("WM", "ab", "WM", "R")
    p.on("WM", "0", "XR", "R", "a")
    p.on("WM", "1", "XR", "R", "b")
    p.on("WM", "|", ACCEPT, "S")
    p.on("XR", "01ab", "XR", "R")
    p.on("XR", "|", "XF", "R")
    # the first unmarked bit is w[m]; query chi_C at the cell left of it (cell m)
    p.on("FIND", "z|ab01", "FIND", "L")
    p.on("FIND", "^", "FM", "R")
    p.on("FM", "ab", "FM", "R")
    p.on("FM", "0", "Qw0", "L")
    p.on("FM", "1", "Qw1", "L")
    p.on("FM", "|", ACCEPT, "S")
    p.query("Qw0", REJECT, ACCEPT)
    p.query("Qw1", ACCEPT, REJECT)
    return p.done()


# The guest: A --1--> B --1--> halt; a 0 sends it back to A; blanks loop.
GUEST_TABLE = {
    ("A", "0"): ("A", "R"),
    ("A", "1"): ("B", "R"),
    ("A", "_"): ("A", "S"),
    ("B", "0"): ("A", "R"),
    ("B", "1"): ("H", "S"),
    ("B", "_"): ("B", "S"),
}


def guest_halting_time(w: str, limit: int) -> int | None:
    """Steps until the guest enters H on input ``w``, or None within ``limit``."""
    state, pos = "A", 0
    for t in range(1, limit + 1):
        sym = w[pos] if pos < len(w) else "_"
        state, mv = GUEST_TABLE[(state, sym)]
        if state == "H":
            return t
        pos += mv == "R"
    return None


def halt_search() -> PredicateProgram:
    p = _Prog("HALT-SEARCH", "xycde")
    p.on("s", "^", "W", "R")
    p.on("W", "01", "W", "R")
    p.on("W", "|", _compare(p, "", "RESET"), "R")
    # restore the l-region so its ones can serve as fuel
    p.on("RESET", "|", "RESET", "R")
    p.on("RESET", "y", "RESET", "R", "1")
    p.on("RESET", "1", "RESET", "R")
    p.on("RESET", "_", "HOME", "L")
    p.on("HOME", "01|xy_", "HOME", "L")
    p.on("HOME", "^", "PLACE_A", "R")
    for g in "AB":
        # guest head marks: c = 0, d = 1, e = blank (the first separator)
        p.on(f"PLACE_{g}", "0", f"FUEL1_{g}", "S", "c")
        p.on(f"PLACE_{g}", "1", f"FUEL1_{g}", "S", "d")
        p.on(f"PLACE_{g}", "|", f"FUEL1_{g}", "S", "e")
        p.on(f"FUEL1_{g}", "01cd", f"FUEL1_{g}", "R")
        p.on(f"FUEL1_{g}", "|e", f"FUEL2_{g}", "R")
        p.on(f"FUEL2_{g}", "1x", f"FUEL2_{g}", "R")
        p.on(f"FUEL2_{g}", "|", f"FUEL3_{g}", "R")
        p.on(f"FUEL3_{g}", "y", f"FUEL3_{g}", "R")
        p.on(f"FUEL3_{g}", "1", f"RET_{g}", "L", "y")
        p.on(f"FUEL3_{g}", "_", REJECT, "S")
        p.on(f"RET_{g}", "01xy|", f"RET_{g}", "L")
        p.on(f"RET_{g}", "cde", f"STEP_{g}", "S")
        for mark, sym in (("c", "0"), ("d", "1"), ("e", "_")):
            nxt, mv = GUEST_TABLE[(g, sym)]
            if nxt == "H":
                p.on(f"STEP_{g}", mark, ACCEPT, "S")
            elif mv == "S":
                p.on(f"STEP_{g}", mark, f"FUEL1_{nxt}", "S")
            else:
                p.on(f"STEP_{g}", mark, f"PLACE_{nxt}", "R", sym)
    return p.done()


# ---------------------------------------------------------------------------
# Reference semantics and family knowledge

Oracle = Callable[[int], int]


def parity_ref(c: Oracle, m: int, ell: int, w: str) -> bool:
    return ell >= m and w.count("1") % 2 == 0


def member_ref(c: Oracle, m: int, ell: int, w: str) -> bool:
    return ell >= m and (m >= len(w) or c(m) == int(w[m]))


def halt_ref(c: Oracle, m: int, ell: int, w: str) -> bool:
    return ell >= m and guest_halting_time(w, ell) is not None


@dataclass(frozen=True)
class Family:
    """A bundled predicate with what we know about it.

    ``in_language(w)`` is the ground truth for ``w`` being in the language of
    the asymptotic/nonwandering set.  ``witness(w)`` returns stream
    descriptors ``(cSet, skolem)`` of a canonical accepting guess (None for
    words outside the language).  ``oracle_span(w)`` bounds the oracle
    indices the program can query, so candidate sets over that range suffice.
    """

    name: str
    build: Callable[[], PredicateProgram]
    reference: Callable[[Oracle, int, int, str], bool]
    in_language: Callable[[str], bool]
    witness: Callable[[str], tuple[dict, dict] | None]
    oracle_span: Callable[[str], int]
    # bounds (m_max, l_max, c_max) under which bounded search is conclusive
    sufficient: Callable[[str, int, int, int], bool] = lambda w, m, l, c: False


def _w_empty(w: str) -> tuple[dict, dict]:
    return {"kind": "const", "bit": 0}, {"kind": "skolem", "a": 1, "b": 0}


def _w_member(w: str) -> tuple[dict, dict]:
    return {"kind": "prefix", "bits": w, "then": 0}, {"kind": "skolem", "a": 1, "b": 0}


def _w_halt(w: str) -> tuple[dict, dict] | None:
    if "11" not in w:
        return None
    return {"kind": "const", "bit": 0}, {"kind": "skolem", "a": 1, "b": len(w) + 2}


# Why the bounds suffice:
# PARITY ignores C and, once l >= m, ignores l and m: m = 1 with l = 1 decides.
# MEMBER only queries chi_C below |w| and accepts every m >= |w| with l = m.
# HALT-SEARCH ignores C; the guest halts within |w| steps or never.
FAMILIES: dict[str, Family] = {
    f.name: f
    for f in (
        Family(
            "PARITY",
            parity,
            parity_ref,
            lambda w: w.count("1") % 2 == 0,
            lambda w: _w_empty(w) if w.count("1") % 2 == 0 else None,
            lambda w: 0,
            lambda w, m, l, c: m >= 1 and l >= m,
        ),
        Family(
            "MEMBER",
            member,
            member_ref,
            lambda w: True,
            _w_member,
            len,
            lambda w, m, l, c: c >= len(w) and m >= len(w) + 1 and l >= m,
        ),
        Family(
            "HALT-SEARCH",
            halt_search,
            halt_ref,
            lambda w: "11" in w,
            _w_halt,
            lambda w: 0,
            lambda w, m, l, c: m >= 1 and l >= m + len(w),
        ),
        Family(
            "ALWAYS-ACCEPT",
            always_accept,
            lambda c, m, l, w: True,
            lambda w: True,
            _w_empty,
            lambda w: 0,
            lambda w, m, l, c: True,
        ),
        Family(
            "ALWAYS-REJECT",
            always_reject,
            lambda c, m, l, w: False,
            lambda w: False,
            lambda w: None,
            lambda w: 0,
            lambda w, m, l, c: m >= 1,
        ),
    )
}


def default_pred_fuel(m: int, ell: int, w: str) -> int:
    """Generous step budget: every bundled program is quadratic in its tape."""
    n = m + ell + len(w) + 4
    return 8 * n * n + 64


def builtin_programs() -> dict[str, PredicateProgram]:
    return {name: fam.build() for name, fam in FAMILIES.items()}


def load_bundled(name: str) -> PredicateProgram:
    """Predicate program from the shipped JSON table."""
    data = json.loads(resources.files("sigma_ca.data").joinpath("predicates.json").read_text())
    if name not in data:
        raise IllFormedMachine(f"unknown predicate {name!r}; bundled: {', '.join(sorted(data))}")
    return PredicateProgram.from_json(data[name])


def dump_bundled() -> str:
    return json.dumps({n: p.to_json() for n, p in builtin_programs().items()}, indent=1, sort_keys=True) + "\n"


__all__ = [
    "FAMILIES",
    "Family",
    "GUEST_TABLE",
    "builtin_programs",
    "default_pred_fuel",
    "dump_bundled",
    "guest_halting_time",
    "load_bundled",
]
