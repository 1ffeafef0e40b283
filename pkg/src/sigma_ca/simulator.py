"""Exact simulation of local rules on lazily materialized configurations.

Two engines share one contract (every reported cell is exact):

* :func:`step` is the dense reference: the window grows by the radius on
  each side and the tails are replaced by their images.
* :func:`run_trace` uses a change-driven engine whenever both tails can be
  certified as fixed points of the rule.  After the first step only cells
  within the radius of a cell that changed in the previous step can change,
  so each step costs time proportional to the activity, not the window.
  Otherwise it falls back to repeated dense steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .core_model import (
    ARROW_LEFT,
    ARROW_RIGHT,
    SPREAD,
    CellAlphabet,
    Configuration,
    ConstantTail,
    LocalRule,
    Main,
    MappedTail,
    PeriodicTail,
    TailGenerator,
    is_arrow,
)

# ---------------------------------------------------------------------------
# Dense stepping


def _image_tail(tail: TailGenerator, rule: LocalRule, side: str) -> TailGenerator:
    """Image of a tail anchored at a window edge, anchored ``radius`` further out."""
    w = rule.width
    if isinstance(tail, ConstantTail):
        return ConstantTail(rule.transition((tail.cell,) * w))
    if isinstance(tail, PeriodicTail):
        word = tail.word
        p = len(word)
        if side == "right":
            out = [rule.transition(tuple(word[(k + j) % p] for j in range(w))) for k in range(p)]
        else:
            out = [rule.transition(tuple(word[(k + w - 1 - j) % p] for j in range(w))) for k in range(p)]
        return PeriodicTail(tuple(out))
    if _fixed_from(tail, rule, side) == 0:
        return tail.shifted(rule.radius)
    return MappedTail(tail, rule, side)


def step(rule: LocalRule, config: Configuration) -> Configuration:
    """One application of the rule; the window grows by the radius per side."""
    r = rule.radius
    left, right = config.detached_tails()
    lo, hi = config.lo, config.hi
    work = config.copy()
    cells = work.segment(lo - 2 * r, hi + 2 * r)
    new = rule.apply_segment(cells)
    return Configuration(
        lo - r, new, _image_tail(left, rule, "left"), _image_tail(right, rule, "right"), config.alphabet
    )


def _fixed_from(tail: TailGenerator, rule: LocalRule, side: str) -> int | None:
    """Offset beyond which the tail is certified to be a fixed point of the rule."""
    w = rule.width
    if isinstance(tail, ConstantTail):
        return 0 if rule.transition((tail.cell,) * w) == tail.cell else None
    if isinstance(tail, PeriodicTail):
        return 0 if _image_tail(tail, rule, side).word == tail.word else None
    off = None
    if rule.quiescence is not None:
        off = tail.quiescent_from(rule.quiescence, side)
    if off is None and rule.tail_certifier is not None:
        off = rule.tail_certifier(tail, side)
    return off


# ---------------------------------------------------------------------------
# Probes


def detect_signaling(config: Configuration, w: str, alphabet: CellAlphabet | None = None) -> bool:
    """Whether the configuration lies in the signalling cylinder of ``w``.

    Only cells ``-1 .. |w|`` are inspected: the hash cell with ``>``, the input
    with the signalling head on cell 0 and ``<`` after it, then Sep with
    ``<`` (or the head, for the empty word).  Helper contents are ignored.
    """
    a = alphabet or config.alphabet
    if a is None or a.signal_state is None:
        raise ValueError("signalling needs an alphabet with a signal state")
    return _signal_matcher(a, w)(config.cell_at)


def _signal_matcher(a: CellAlphabet, w: str):
    n = len(w)
    expect = {-1: ({a.mains.index(Main.HASH)}, a.heads.index(ARROW_RIGHT))}
    q0 = a.heads.index(a.signal_state)
    for i, ch in enumerate(w):
        main = Main.A1 if ch == "1" else Main.A0
        expect[i] = ({a.mains.index(main)}, q0 if i == 0 else a.heads.index(ARROW_LEFT))
    expect[n] = ({a.mains.index(Main.SEP)}, q0 if n == 0 else a.heads.index(ARROW_LEFT))
    items = sorted(expect.items())

    def match(get) -> bool:
        for x, (mains, head) in items:
            idx = get(x)
            if idx == 0:
                return False
            mi, hi = a.main_head_of(idx)
            if hi != head or mi not in mains:
                return False
        return True

    return match


@dataclass
class TraceReport:
    steps: int
    signaling_times: list[int] = field(default_factory=list)
    spread_at: int | None = None
    spread_pos: int | None = None
    recurrence_times: list[int] | None = None
    final: Configuration | None = None
    static_from: int | None = None  # configuration constant from this step on
    dumps: list[tuple[int, str]] = field(default_factory=list)

    def events(self) -> list[tuple[int, str]]:
        """Event lines in time order (signals, first spread, recurrences)."""
        ev: list[tuple[int, int, str]] = [(t, 0, f"t={t} SIGNAL") for t in self.signaling_times]
        if self.spread_at is not None:
            ev.append((self.spread_at, 1, f"t={self.spread_at} SPREAD@{self.spread_pos}"))
        for t in self.recurrence_times or ():
            ev.append((t, 2, f"t={t} RECUR"))
        ev.extend((t, 3, text) for t, text in self.dumps)
        return [(t, text) for t, _, text in sorted(ev, key=lambda e: (e[0], e[1]))]

    def event_lines(self) -> list[str]:
        return [text for _, text in self.events()]


def run_trace(
    rule: LocalRule,
    config: Configuration,
    fuel: int,
    *,
    signal_word: str | None = None,
    window: int | None = None,
    stop_on_spread: bool = False,
    stop_after_signals: int | None = None,
    spread_index: int | None = 0,
    dump_every: int | None = None,
    dump_range: tuple[int, int] | None = None,
    engine: str = "auto",
) -> TraceReport:
    """Iterate the rule up to ``fuel`` steps, recording the probes.

    ``signal_word`` enables the signalling probe (time 0 included).
    ``window = k`` records the steps ``t >= 1`` at which cells ``[-k, k]``
    equal their time-0 values.  Spread (cell index ``spread_index``) is
    looked for among the cells that change, which covers every cell the
    rule could have turned into Spread.  ``stop_after_signals`` stops once
    that many signalling times after time 0 have been seen.
    """
    if fuel < 0:
        raise ValueError("fuel must be >= 0")
    if window is not None and window < 1:
        raise ValueError("window width must be >= 1")
    if engine not in ("auto", "sparse", "dense"):
        raise ValueError(f"unknown engine {engine!r}")
    sim = _Sparse.try_build(rule, config) if engine != "dense" else None
    if sim is None:
        if engine == "sparse":
            raise ValueError("tails are not certified fixed points; the sparse engine is unavailable")
        sim = _Dense(rule, config)
    return _trace(sim, fuel, signal_word, window, stop_on_spread, stop_after_signals,
                  spread_index, dump_every, dump_range)


def window_recurrences(rule: LocalRule, config: Configuration, fuel: int, k: int) -> list[int]:
    if k < 1:
        raise ValueError("window width must be >= 1")
    return run_trace(rule, config, fuel, window=k, spread_index=None).recurrence_times or []


def _trace(sim, fuel, signal_word, window, stop_on_spread, stop_after_signals,
           spread_index, dump_every, dump_range) -> TraceReport:
    report = TraceReport(steps=0, recurrence_times=[] if window is not None else None)
    alphabet = sim.config.alphabet
    match = _signal_matcher(alphabet, signal_word) if signal_word is not None else None
    sig_lo, sig_hi = (-1, len(signal_word)) if signal_word is not None else (0, -1)
    get = sim.get
    signalling = bool(match and match(get))
    if signalling:
        report.signaling_times.append(0)
    ref = [get(x) for x in range(-window, window + 1)] if window is not None else None
    mismatch = 0
    if spread_index is not None:
        lo, hi = sim.bounds()
        for x in range(lo, hi + 1):
            if get(x) == spread_index:
                report.spread_at, report.spread_pos = 0, x
                break
    if dump_every:
        report.dumps.append((0, render_line(sim.config, 0, dump_range)))

    t = 0
    while t < fuel:
        if stop_on_spread and report.spread_at is not None:
            break
        if stop_after_signals is not None and len(report.signaling_times) - 1 >= stop_after_signals:
            break
        changed = sim.advance()
        t += 1
        if changed is None:  # dense engine: everything may have changed
            if match:
                signalling = match(get)
            if ref is not None:
                mismatch = sum(get(x) != ref[i] for i, x in enumerate(range(-window, window + 1)))
            if spread_index is not None and report.spread_at is None:
                lo, hi = sim.bounds()
                for x in range(lo, hi + 1):
                    if get(x) == spread_index:
                        report.spread_at, report.spread_pos = t, x
                        break
        else:
            if not changed:
                report.static_from = t - 1
                # nothing will ever change again: the probes repeat
                if signalling:
                    report.signaling_times.extend(range(t, fuel + 1))
                if ref is not None and mismatch == 0:
                    report.recurrence_times.extend(range(t, fuel + 1))
                t = fuel
                break
            sig_dirty = False
            for x, old, new in changed:
                if sig_lo <= x <= sig_hi:
                    sig_dirty = True
                if ref is not None and -window <= x <= window:
                    r0 = ref[x + window]
                    mismatch += (new != r0) - (old != r0)
                if spread_index is not None and new == spread_index and report.spread_at is None:
                    report.spread_at, report.spread_pos = t, x
            if sig_dirty and match:
                signalling = match(get)
            if report.spread_at == t:
                report.spread_pos = min(x for x, _, new in changed if new == spread_index)
        if signalling:
            report.signaling_times.append(t)
        if ref is not None and mismatch == 0:
            report.recurrence_times.append(t)
        if dump_every and t % dump_every == 0:
            report.dumps.append((t, render_line(sim.config, t, dump_range)))
    report.steps = t
    report.final = sim.config
    return report


class _Sparse:
    """Change-driven exact engine; valid when both tails are fixed points."""

    CHUNK = 64

    def __init__(self, rule: LocalRule, config: Configuration) -> None:
        self.rule = rule
        self.config = config
        if rule.reach is not None and rule.local is not None:
            self.r, self.f = rule.reach, rule.local
        else:
            self.r, self.f = rule.radius, rule.transition
        lo, hi = config.window
        self.pending: Iterable[int] | None = None
        r = rule.radius  # the first step may reach the full radius into the tails
        self._first = (lo - r, hi + r)

    @classmethod
    def try_build(cls, rule: LocalRule, config: Configuration) -> _Sparse | None:
        cfg = config.copy()
        left, right = cfg.detached_tails()
        off_l = _fixed_from(left, rule, "left")
        off_r = _fixed_from(right, rule, "right")
        if off_l is None or off_r is None:
            return None
        cfg.widen(cfg.lo - off_l, cfg.hi + off_r)
        # re-anchor the tails at the window edges so later widening is plain
        left, right = cfg.detached_tails()
        cells, lo = cfg.live()
        fresh = Configuration(lo, list(cells), left, right, cfg.alphabet)
        return cls(rule, fresh)

    def get(self, x: int) -> int:
        return self.config.cell_at(x)

    def bounds(self) -> tuple[int, int]:
        return self.config.window

    def advance(self) -> list[tuple[int, int, int]]:
        r = self.r
        f = self.f
        cfg = self.config
        if self.pending is None:
            lo, hi = self._first
            cand: Iterable[int] = range(lo, hi + 1)
        else:
            cand = self.pending
        cells, base = cfg.live()
        w = 2 * r + 1
        off = base + r
        limit = len(cells) - w
        changes = []
        for x in cand:
            i = x - off
            if i < 0 or i > limit:
                cfg.widen(min(cfg.lo, x - r - self.CHUNK), max(cfg.hi, x + r + self.CHUNK))
                cells, base = cfg.live()
                off = base + r
                limit = len(cells) - w
                i = x - off
            v = f(tuple(cells[i : i + w]))
            if v != cells[i + r]:
                changes.append((x, cells[i + r], v))
        for x, _, v in changes:
            cells[x - base] = v
        if not changes:
            self.pending = ()
        else:
            xs = [c[0] for c in changes]
            a, b = min(xs), max(xs)
            if b - a <= 4 * r:  # clustered activity: one span
                self.pending = range(a - r, b + r + 1)
            else:
                self.pending = sorted({y for x in xs for y in range(x - r, x + r + 1)})
        return changes


class _Dense:
    def __init__(self, rule: LocalRule, config: Configuration) -> None:
        self.rule = rule
        self.config = config.copy()

    def get(self, x: int) -> int:
        return self.config.cell_at(x)

    def bounds(self) -> tuple[int, int]:
        return self.config.window

    def advance(self) -> None:
        self.config = step(self.rule, self.config)
        return None


def iterate(rule: LocalRule, config: Configuration, fuel: int):
    """Yield ``(t, configuration)`` for t = 0..fuel (the configuration is live)."""
    sim = _Sparse.try_build(rule, config) or _Dense(rule, config)
    yield 0, sim.config
    for t in range(1, fuel + 1):
        sim.advance()
        yield t, sim.config


# ---------------------------------------------------------------------------
# Helpers over compiled systems


def find_head(config: Configuration, lo: int | None = None, hi: int | None = None) -> tuple[int, str] | None:
    """Leftmost cell in the materialized window (or ``[lo, hi]``) holding a state."""
    a = config.alphabet
    lo = config.lo if lo is None else lo
    hi = config.hi if hi is None else hi
    for x in range(lo, hi + 1):
        idx = config.cell_at(x)
        if idx and not is_arrow(a.head_of(idx)):
            return x, a.head_of(idx)
    return None


# ---------------------------------------------------------------------------
# Rendering

_MAIN_GLYPH = {Main.HASH: "# ", Main.SEP: "| ", Main.A0: "0 ", Main.A1: "1 "}


def render_cell(a: CellAlphabet, idx: int) -> str:
    """Four characters: main (2), head (1), helper (1); Spread is ``!!!!``."""
    cell = a.cell(idx)
    if cell is SPREAD:
        return "!!!!"
    main, head, work = cell
    m = _MAIN_GLYPH.get(main) or f"{main.b}{main.c}"
    h = head if is_arrow(head) else ("q" if head == a.signal_state else "*")
    g, _, flags = work.partition("/")
    if g == "." and flags:
        g = flags[0]
    return m + h + g[:1]


def render_window(config: Configuration, lo: int, hi: int) -> str:
    a = config.alphabet
    if a is None:
        return " ".join(str(config.cell_at(x)) for x in range(lo, hi + 1))
    return "".join(render_cell(a, config.cell_at(x)) for x in range(lo, hi + 1))


def render_line(config: Configuration, t: int, rng: tuple[int, int] | None = None) -> str:
    lo, hi = rng or config.window
    text = f"t={t} [{lo},{hi}] {render_window(config, lo, hi)}"
    if config.alphabet is not None:
        head = find_head(config, lo, hi)
        if head is not None:
            text += f" head={head[1]}@{head[0]}"
    return text


__all__ = [
    "TraceReport",
    "detect_signaling",
    "find_head",
    "iterate",
    "render_cell",
    "render_line",
    "render_window",
    "run_trace",
    "step",
    "window_recurrences",
]
