"""Constant-length binary recoding of a cellular automaton.

Cell index ``s`` becomes the codeword ``1110 d1 0 d2 0 ... dk 0`` where
``d1..dk`` are the ``k = ceil(log2 n)`` binary digits of ``s``, most
significant first; ``L = 4 + 2k``.  Data bits are separated by zeros and
every codeword ends in 0, so ``111`` occurs in a concatenation of codewords
only at codeword starts; that is how the binary rule finds the alignment.

The binary rule has radius ``(r + 1) * L`` and performs one original step
per binary step.  A bit at position ``z`` looks for the sync ``1110`` at the
nearest ``s <= z`` with ``z - s < L``, decodes the ``2r + 1`` codewords
around ``s``, applies the original rule and outputs bit ``z - s`` of the
result's codeword.  Anything else (no sync, a corrupt codeword) yields 0;
zero runs wipe out codewords, so 0 spreads and the all-zero point is fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .core_model import (
    Configuration,
    ConstantTail,
    LocalRule,
    PeriodicTail,
    ShiftedTail,
    TailGenerator,
)

SYNC = (1, 1, 1, 0)


class DecodeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SubstitutionCode:
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("a substitution code needs at least two symbols")
        k = max(1, math.ceil(math.log2(self.n)))
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "L", 4 + 2 * k)
        object.__setattr__(self, "_cache", {})

    def codeword(self, s: int) -> tuple[int, ...]:
        cw = self._cache.get(s)
        if cw is None:
            if not 0 <= s < self.n:
                raise ValueError(f"symbol {s} outside 0..{self.n - 1}")
            digits = [(s >> (self.k - 1 - i)) & 1 for i in range(self.k)]
            cw = SYNC + tuple(b for d in digits for b in (d, 0))
            self._cache[s] = cw
        return cw

    def decode(self, bits) -> int | None:
        """Symbol whose codeword is ``bits`` (length L), else None."""
        if tuple(bits[:4]) != SYNC:
            return None
        v = 0
        for i in range(self.k):
            d, sep = bits[4 + 2 * i], bits[5 + 2 * i]
            if sep != 0 or d not in (0, 1):
                return None
            v = 2 * v + d
        return v if v < self.n else None

    def codeword_matrix(self) -> np.ndarray:
        s = np.arange(self.n, dtype=np.int64)[:, None]
        shifts = np.arange(self.k - 1, -1, -1, dtype=np.int64)[None, :]
        digits = (s >> shifts) & 1
        data = np.zeros((self.n, 2 * self.k), dtype=np.uint8)
        data[:, 0::2] = digits
        head = np.tile(np.array(SYNC, dtype=np.uint8), (self.n, 1))
        return np.hstack([head, data])


# ---------------------------------------------------------------------------
# Sync property


def _has_111(rows: np.ndarray) -> np.ndarray:
    """Per row: positions j >= 1 where bits j..j+2 are 111 (start excluded)."""
    hits = rows[:, :-2] & rows[:, 1:-1] & rows[:, 2:]
    return hits[:, 1:].any(axis=1)


def sync_violations(code: SubstitutionCode) -> list[str]:
    """Ways ``111`` can occur away from a codeword start in ``uv``.

    An occurrence is inside ``u``, inside ``v``, or straddles the boundary.
    The first two are checked per codeword; a straddling occurrence only
    depends on a suffix of ``u`` and a prefix of ``v`` (at most two bits
    each), so checking all realized suffix/prefix combinations covers every
    pair ``(u, v)`` exactly.
    """
    m = code.codeword_matrix()
    out = []
    bad = np.nonzero(_has_111(m))[0]
    out.extend(f"codeword {int(s)} contains 111 after its start" for s in bad[:10])
    suffixes = {tuple(int(b) for b in row[-j:]) for row in m for j in (1, 2)}
    prefixes = {tuple(int(b) for b in row[:j]) for row in m for j in (1, 2)}
    for suf in suffixes:
        for pre in prefixes:
            if len(suf) + len(pre) == 3 and suf + pre == (1, 1, 1):
                out.append(f"boundary occurrence {suf}|{pre}")
    return out


def sync_violations_bruteforce(code: SubstitutionCode) -> list[str]:
    """Enumerate every concatenation of two codewords (small alphabets only)."""
    L = code.L
    out = []
    for u, v in product(range(code.n), repeat=2):
        bits = code.codeword(u) + code.codeword(v)
        for j in range(len(bits) - 2):
            if bits[j : j + 3] == (1, 1, 1) and j not in (0, L):
                out.append(f"{u}.{v} at {j}")
    return out


# ---------------------------------------------------------------------------
# Encoding of configurations


class EncodedTail(TailGenerator):
    """Bit-level view of a cell tail."""

    def __init__(self, base: TailGenerator, code: SubstitutionCode, side: str) -> None:
        self.base = base
        self.code = code
        self.side = side

    def at(self, k: int):
        q, r = divmod(k, self.code.L)
        cw = self.code.codeword(self.base.at(q))
        return cw[r] if self.side == "right" else cw[self.code.L - 1 - r]

    def descriptor(self, encode=lambda c: c) -> dict:
        return {"kind": "encoded", "L": self.code.L, "base": self.base.descriptor(encode)}


def encode_tail(tail: TailGenerator, code: SubstitutionCode, side: str) -> TailGenerator:
    if isinstance(tail, ConstantTail):
        tail = PeriodicTail((tail.cell,))
    if isinstance(tail, PeriodicTail):
        bits = [b for c in tail.word for b in code.codeword(c)]
        if side == "left":
            # offsets run leftward: each codeword is read back to front
            bits = [b for c in tail.word for b in reversed(code.codeword(c))]
        return PeriodicTail(tuple(bits))
    return EncodedTail(tail, code, side)


def encode_config(config: Configuration, code: SubstitutionCode) -> Configuration:
    left, right = config.detached_tails()
    bits = [b for c in config.cells() for b in code.codeword(c)]
    return Configuration(
        config.lo * code.L, bits, encode_tail(left, code, "left"), encode_tail(right, code, "right")
    )


def decode_window(bits, code: SubstitutionCode) -> list[int]:
    """Cells of the codewords following the first sync marker.

    Leading bits before the first ``1110`` and a trailing partial codeword are
    ignored; every complete codeword after the marker must be valid.
    """
    bits = [int(b) for b in bits]
    L = code.L
    start = next((j for j in range(len(bits) - 3) if tuple(bits[j : j + 4]) == SYNC), None)
    if start is None:
        raise DecodeError("no sync marker")
    out = []
    for j in range(start, len(bits) - L + 1, L):
        s = code.decode(bits[j : j + L])
        if s is None:
            raise DecodeError(f"invalid codeword at bit {j}")
        out.append(s)
    if not out:
        raise DecodeError("no complete codeword after the sync marker")
    return out


def decode_config(config: Configuration, code: SubstitutionCode, lo: int, hi: int) -> list[int]:
    """Cells ``lo..hi`` of an aligned binary configuration."""
    L = code.L
    out = []
    for x in range(lo, hi + 1):
        s = code.decode(config.segment(x * L, x * L + L - 1))
        if s is None:
            raise DecodeError(f"invalid codeword for cell {x}")
        out.append(s)
    return out


# ---------------------------------------------------------------------------
# The binary rule


def recode_binary(rule: LocalRule, alphabet_size: int | None = None) -> tuple[LocalRule, SubstitutionCode]:
    n = alphabet_size or rule.alphabet_size
    code = SubstitutionCode(n)
    L, r = code.L, rule.radius
    R = (r + 1) * L
    f = rule.transition
    decode = code.decode
    codeword = code.codeword

    def bit(nb: tuple) -> int:
        z = R
        for s in range(z, z - L, -1):
            if nb[s : s + 4] == SYNC:
                break
        else:
            return 0
        cells = []
        for j in range(-r, r + 1):
            a = s + j * L
            c = decode(nb[a : a + L])
            if c is None:
                return 0
            cells.append(c)
        return codeword(f(tuple(cells)))[z - s]

    def batch(bits) -> list[int]:
        bits = tuple(bits)
        N = len(bits)
        sync = [bits[j : j + 4] == SYNC for j in range(N - 3)] + [False] * min(3, N)
        last = [-1] * N
        cur = -1
        for j in range(N):
            if sync[j]:
                cur = j
            last[j] = cur
        decoded: dict[int, int | None] = {}
        result: dict[int, tuple | None] = {}

        def dec(a: int):
            if a not in decoded:
                decoded[a] = decode(bits[a : a + L]) if a >= 0 and a + L <= N else None
            return decoded[a]

        out = []
        for z in range(R, N - R):
            s = last[z]
            if s < 0 or z - s >= L:
                out.append(0)
                continue
            if s not in result:
                cells = [dec(s + j * L) for j in range(-r, r + 1)]
                result[s] = None if None in cells else codeword(f(tuple(cells)))
            cw = result[s]
            out.append(0 if cw is None else cw[z - s])
        return out

    def certify(tail: TailGenerator, side: str) -> int | None:
        d = 0
        if isinstance(tail, ShiftedTail):
            tail, d = tail.base, tail.d
        if not isinstance(tail, EncodedTail) or tail.code is not code:
            return None
        off = None
        if rule.quiescence is not None:
            off = tail.base.quiescent_from(rule.quiescence, side)
        if off is None and rule.tail_certifier is not None:
            off = rule.tail_certifier(tail.base, side)
        if off is None:
            return None
        # codewords from cell offset off + r on are fixed by the original rule
        return max(0, (off + r) * L - d)

    binary = LocalRule(2, R, bit, batch=batch, tail_certifier=certify, name=f"binary[{rule.name}]")
    return binary, code


__all__ = [
    "DecodeError",
    "EncodedTail",
    "SubstitutionCode",
    "decode_config",
    "decode_window",
    "encode_config",
    "encode_tail",
    "recode_binary",
    "sync_violations",
    "sync_violations_bruteforce",
]
