"""Bit streams for the guessed set, the Skolem stream and the counter track.

Streams are described by small JSON documents so that configurations and
witnesses survive a round trip through files:

``{"kind": "const", "bit": 0}``
``{"kind": "periodic", "bits": "0110"}``
``{"kind": "prefix", "bits": "0110", "then": 0}``
``{"kind": "skolem", "a": 1, "b": 0}`` -- unary codes 1^l 0 for l_i = a*i + b, i >= 1
``{"kind": "skolem-list", "values": [2, 5], "then": 0}`` -- listed codes, then a constant bit
``{"kind": "stall"}`` -- never emits (for fuel tests)
"""

from __future__ import annotations

import itertools
from typing import Iterator

from .core_model import (
    ARROW_LEFT,
    BLANK_WORK,
    DEFAULT_EMIT_FUEL,
    PROGRAM_REGISTRY,
    CellAlphabet,
    GeneratorStuck,
    Quiescence,
    StreamProgram,
    TrackedCell,
    pair,
)


class BitStream:
    def __init__(self, desc: dict, fuel: int = DEFAULT_EMIT_FUEL) -> None:
        self.desc = _check_desc(desc)
        self.fuel = fuel
        self._bits: list[int] = []
        self._it = _bit_program(self.desc)

    def bit(self, i: int) -> int:
        bits = self._bits
        while len(bits) <= i:
            burnt = 0
            for b in self._it:
                if b is not None:
                    bits.append(b)
                    break
                burnt += 1
                if burnt > self.fuel:
                    raise GeneratorStuck(f"stream {self.desc['kind']}: no bit within {self.fuel} steps")
            else:  # pragma: no cover - every kind is infinite
                raise GeneratorStuck("stream ended")
        return bits[i]

    __call__ = bit

    def prefix(self, n: int) -> str:
        return "".join(str(self.bit(i)) for i in range(n))

    def eventual(self) -> tuple[int, str] | None:
        """``(k, period)``: from index ``k`` on, the stream repeats ``period``."""
        kind = self.desc["kind"]
        if kind == "const":
            return 0, str(self.desc["bit"])
        if kind == "periodic":
            return 0, self.desc["bits"]
        if kind == "prefix":
            return len(self.desc["bits"]), str(self.desc["then"])
        if kind == "skolem-list":
            n = sum(v + 1 for v in self.desc["values"])
            return n, str(self.desc["then"])
        return None


def _check_desc(desc: dict) -> dict:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ValueError(f"bad stream descriptor: {desc!r}")
    kind = desc["kind"]
    bitstr = lambda s: isinstance(s, str) and set(s) <= {"0", "1"}  # noqa: E731
    ok = {
        "const": lambda d: d.get("bit") in (0, 1),
        "periodic": lambda d: bitstr(d.get("bits")) and d["bits"] != "",
        "prefix": lambda d: bitstr(d.get("bits")) and d.get("then") in (0, 1),
        "skolem": lambda d: isinstance(d.get("a", 1), int) and isinstance(d.get("b", 0), int)
        and d.get("a", 1) >= 0 and d.get("a", 1) + d.get("b", 0) >= 0,
        "skolem-list": lambda d: all(isinstance(v, int) and v >= 0 for v in d.get("values", []))
        and d.get("then") in (0, 1),
        "stall": lambda d: True,
    }.get(kind)
    if ok is None or not ok(desc):
        raise ValueError(f"bad stream descriptor: {desc!r}")
    return desc


def _bit_program(desc: dict) -> Iterator[int | None]:
    kind = desc["kind"]
    if kind == "const":
        return itertools.repeat(desc["bit"])
    if kind == "periodic":
        return itertools.cycle(int(b) for b in desc["bits"])
    if kind == "prefix":
        return itertools.chain((int(b) for b in desc["bits"]), itertools.repeat(desc["then"]))
    if kind == "skolem":
        a, b = desc.get("a", 1), desc.get("b", 0)
        return _unary_codes(a * i + b for i in itertools.count(1))
    if kind == "skolem-list":
        return itertools.chain(_unary_codes(desc["values"]), itertools.repeat(desc["then"]))
    return itertools.repeat(None)


def _unary_codes(values) -> Iterator[int]:
    for v in values:
        yield from itertools.repeat(1, v)
        yield 0


def skolem_values(stream: BitStream, count: int, limit: int = 10**6) -> list[int | None]:
    """Decode the first ``count`` unary codes; ``None`` if a code runs past ``limit`` ones."""
    out: list[int | None] = []
    i = 0
    for _ in range(count):
        n = 0
        while stream.bit(i) == 1:
            n += 1
            i += 1
            if n > limit:
                out.append(None)
                return out
        i += 1
        out.append(n)
    return out


def stream_bit_at_pair(c_set: BitStream, skolem: BitStream, j: int) -> int:
    """b-track bit at pair index j: even pairs carry the set, odd pairs the Skolem stream."""
    return c_set.bit(j // 2) if j % 2 == 0 else skolem.bit(j // 2)


class PairTrackProgram(StreamProgram):
    """Pair cells ``(Pair(b_j, c_j), <, .)`` for j = start, start+1, ..."""

    name = "pair-track"

    def __init__(
        self,
        alphabet: CellAlphabet,
        c_set: dict,
        skolem: dict,
        c: dict | None = None,
        start: int = 0,
        fuel: int = DEFAULT_EMIT_FUEL,
    ) -> None:
        self.alphabet = alphabet
        self.c_set_desc = c_set
        self.skolem_desc = skolem
        self.c_desc = c if c is not None else {"kind": "const", "bit": 0}
        self.start = start
        self.fuel = fuel
        self.c_set = BitStream(c_set, fuel)
        self.skolem = BitStream(skolem, fuel)
        self.c = BitStream(self.c_desc, fuel)
        self._cells = {
            (b, cb): alphabet.index(TrackedCell(pair(b, cb), ARROW_LEFT, BLANK_WORK))
            for b in (0, 1)
            for cb in (0, 1)
        }

    def cell(self, j: int) -> int:
        return self._cells[(stream_bit_at_pair(self.c_set, self.skolem, j), self.c.bit(j))]

    def run(self) -> Iterator[int]:
        for j in itertools.count(self.start):
            yield self.cell(j)

    def params(self, encode) -> dict:
        return {"cSet": self.c_set_desc, "skolem": self.skolem_desc, "c": self.c_desc, "start": self.start}

    def quiescent_from(self, q: Quiescence, side: str) -> int | None:
        if side != "right" or q is None:
            return None
        ev = self.c.eventual()
        if ev is None:
            return None
        k, period = ev
        cells = self._cells
        p = len(period)
        for t in range(p):
            c0, c1 = int(period[t]), int(period[(t + 1) % p])
            for b0 in (0, 1):
                if q.active(cells[(b0, c0)]):
                    return None
                for b1 in (0, 1):
                    if q.bad_pair(cells[(b0, c0)], cells[(b1, c1)]):
                        return None
        return max(0, k - self.start)


def _pair_track_factory(params: dict, alphabet: CellAlphabet | None) -> PairTrackProgram:
    if alphabet is None:
        raise ValueError("pair-track programs need a cell alphabet")
    return PairTrackProgram(
        alphabet, params["cSet"], params["skolem"], params.get("c"), int(params.get("start", 0))
    )


PROGRAM_REGISTRY["pair-track"] = _pair_track_factory


__all__ = ["BitStream", "GeneratorStuck", "PairTrackProgram", "skolem_values", "stream_bit_at_pair"]
