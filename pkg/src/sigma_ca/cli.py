"""Command-line interface: compile, classify, trace, export."""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from .ca_compiler import (
    DEFAULT_TABLE_BOUND,
    ReductionSystem,
    TableTooLarge,
    build_reduction_ca,
    dumps_system,
    export_table,
    phi,
    rule_description,
    system_from_json,
)
from .core_model import LocalRule, identity_rule, shift_rule
from .guest_machines import CheckerVariant, IllFormedMachine, PredicateProgram
from .harness import (
    DEFAULT_MIN_RECURRENCES,
    FUEL_ENV,
    CanonicalWitness,
    SearchPeriodic,
    Witness,
    canonical_witness,
    default_fuel,
    sample_language,
    words_up_to,
)
from .predicates import load_bundled
from .recoding import DecodeError, decode_config, encode_config, recode_binary
from .simulator import detect_signaling, iterate, render_window, run_trace

EXIT_DISAGREE = 1
EXIT_ERROR = 2
EXIT_TABLE_TOO_LARGE = 3


class DocumentError(ValueError):
    """Invalid input document; ``line`` is 1-based when known."""

    def __init__(self, source: str, message: str, line: int | None = None) -> None:
        where = f"{source}:{line}" if line else source
        super().__init__(f"{where}: {message}")
        self.line = line


def _line_of(text: str, key: str) -> int | None:
    needle = json.dumps(key) + ":"
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line.replace(" ", "").replace("\t", ""):
            return i
    return None


def bundled_systems() -> list[str]:
    root = resources.files("sigma_ca.data").joinpath("systems")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def _read_source(path: str) -> tuple[str, str]:
    p = Path(path)
    if p.exists():
        return p.read_text(), str(p)
    if path in bundled_systems():
        res = resources.files("sigma_ca.data").joinpath("systems", path + ".json")
        return res.read_text(), f"<bundled {path}>"
    raise DocumentError(path, "no such file or bundled system")


def _parse_json(text: str, source: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(source, f"{exc.msg} (column {exc.colno})", exc.lineno) from None
    if not isinstance(doc, dict):
        raise DocumentError(source, "top level must be an object", 1)
    return doc


SYSTEM_KEYS = {"predicate", "variant", "witness", "simulation", "description"}
SIM_KEYS = {"fuel", "minRecurrences", "mode", "maxPeriod"}


def load_system_document(path: str) -> tuple[ReductionSystem, dict]:
    """Parse and validate a system document; returns the system and its defaults."""
    text, source = _read_source(path)
    doc = _parse_json(text, source)

    def fail(key: str, msg: str):
        raise DocumentError(source, msg, _line_of(text, key))

    for key in doc:
        if key not in SYSTEM_KEYS:
            fail(key, f"unknown key {key!r}")
    if "predicate" not in doc:
        raise DocumentError(source, "missing 'predicate'", 1)
    pred_doc = doc["predicate"]
    try:
        if isinstance(pred_doc, str):
            pred = load_bundled(pred_doc)
        elif isinstance(pred_doc, dict):
            pred = PredicateProgram.from_json(pred_doc)
        else:
            fail("predicate", "'predicate' must be a bundled name or an inline program")
        pred.validate()
    except IllFormedMachine as exc:
        fail("predicate", str(exc))
    try:
        variant = CheckerVariant.parse(str(doc.get("variant", "unary")))
    except ValueError as exc:
        fail("variant", str(exc))
    witness = doc.get("witness", "canonical")
    if witness != "canonical":
        try:
            Witness.from_json(witness)
        except (ValueError, TypeError) as exc:
            fail("witness", f"bad witness: {exc}")
    sim = doc.get("simulation", {})
    if not isinstance(sim, dict):
        fail("simulation", "'simulation' must be an object")
    for key, val in sim.items():
        if key not in SIM_KEYS:
            fail(key, f"unknown simulation key {key!r}")
        if key in ("fuel", "minRecurrences", "maxPeriod") and (not isinstance(val, int) or val < 0):
            fail(key, f"{key} must be a non-negative integer")
    if sim.get("mode", "witness") not in ("witness", "search"):
        fail("mode", "mode must be 'witness' or 'search'")
    defaults = {"witness": witness, "simulation": sim}
    if "description" in doc:
        defaults["description"] = doc["description"]
    system = build_reduction_ca(pred, variant)
    return ReductionSystem(
        system.alphabet,
        system.rule,
        system.checker,
        system.variant,
        system.predicate,
        system.helper_alphabet,
        defaults,
    ), defaults


def load_artifact(path: str) -> ReductionSystem:
    p = Path(path)
    if not p.exists():
        raise DocumentError(path, "no such file")
    doc = _parse_json(p.read_text(), path)
    try:
        return system_from_json(doc)
    except (KeyError, ValueError, TypeError) as exc:
        raise DocumentError(path, f"not a valid compiled system: {exc}") from None


# ---------------------------------------------------------------------------
# Commands


def cmd_compile(args) -> int:
    system, _ = load_system_document(args.document)
    data = dumps_system(system)
    if args.output == "-":
        sys.stdout.write(data)
    else:
        Path(args.output).write_text(data)
        print(f"wrote {args.output}: {system.name}, {system.alphabet.size} cell symbols, "
              f"{len(system.checker.transitions)} checker transitions")
    return 0


def _mode_from(args, system: ReductionSystem):
    sim = system.metadata.get("simulation", {})
    mode = args.mode or sim.get("mode", "witness")
    if mode == "search":
        return SearchPeriodic(args.max_period or sim.get("maxPeriod", 3))
    if args.witness is not None:
        text = Path(args.witness).read_text() if Path(args.witness).exists() else args.witness
        try:
            return Witness.from_json(json.loads(text))
        except (json.JSONDecodeError, ValueError, TypeError) as exc:
            raise DocumentError("--witness", str(exc)) from None
    stored = system.metadata.get("witness", "canonical")
    return CanonicalWitness() if stored == "canonical" else Witness.from_json(stored)


def _fuel(args, system: ReductionSystem | None = None) -> int:
    if args.fuel is not None:
        return args.fuel
    # precedence: --fuel, then the environment, then the artifact's default
    sim = system.metadata.get("simulation", {}) if system is not None else {}
    if "fuel" in sim and FUEL_ENV not in os.environ:
        return sim["fuel"]
    return default_fuel()


def cmd_classify(args) -> int:
    system = load_artifact(args.artifact)
    words = list(args.words)
    if args.all_up_to is not None:
        words += words_up_to(args.all_up_to)
    if args.length is not None:
        words += [w for w in words_up_to(args.length) if len(w) == args.length]
    min_rec = args.min_recurrences
    if min_rec is None:
        min_rec = system.metadata.get("simulation", {}).get("minRecurrences", DEFAULT_MIN_RECURRENCES)
    report = sample_language(system, words, _mode_from(args, system), _fuel(args, system), min_rec, args.jobs)
    sys.stdout.write(report.jsonl() if args.jsonl else report.table())
    return 0 if report.all_agree else EXIT_DISAGREE


def cmd_trace(args) -> int:
    system = load_artifact(args.artifact)
    fuel = _fuel(args, system)
    mode = _mode_from(args, system)
    witness = canonical_witness(system, args.word) if isinstance(mode, CanonicalWitness) else mode
    if not isinstance(witness, Witness):
        raise DocumentError("--mode", "trace needs a single witness, not a search")
    config = phi(system, args.word, witness.c_set, witness.skolem, witness.c)
    rng = _parse_range(args.dump_range) if args.dump_range else (-1, len(args.word) + 12)
    if args.binary:
        return _trace_binary(system, config, args.word, fuel, args.dump_every, rng)
    report = run_trace(
        system.rule,
        config,
        fuel,
        signal_word=args.word,
        window=args.window,
        stop_on_spread=args.stop_on_spread,
        dump_every=args.dump_every,
        dump_range=rng,
    )
    for line in report.event_lines():
        print(line)
    print(f"# steps={report.steps} signals={len(report.signaling_times)}"
          + (f" static-from={report.static_from}" if report.static_from is not None else ""))
    return 0


def _trace_binary(system, config, w, fuel, dump_every, rng) -> int:
    rule, code = recode_binary(system.rule, system.alphabet.size)
    bconfig = encode_config(config, code)
    lo, hi = min(rng[0], -1), max(rng[1], len(w))
    spread_seen = False
    print(f"# binary recoding: L={code.L}, radius={rule.radius}")
    for t, cur in iterate(rule, bconfig, fuel):
        try:
            cells = decode_config(cur, code, lo, hi)
        except DecodeError as exc:
            if not spread_seen:
                print(f"t={t} SPREAD@undecodable ({exc})")
            spread_seen = True
            cells = None
        if cells is not None:
            get = dict(zip(range(lo, hi + 1), cells)).__getitem__
            if detect_signaling(_View(get, system.alphabet), w):
                print(f"t={t} SIGNAL")
            if 0 in cells and not spread_seen:
                spread_seen = True
                print(f"t={t} SPREAD@{lo + cells.index(0)}")
        if dump_every and t % dump_every == 0:
            bits = "".join(map(str, cur.segment(rng[0] * code.L, (rng[1] + 1) * code.L - 1)))
            print(f"t={t} bits {bits}")
            if cells is not None:
                view = _View(dict(zip(range(lo, hi + 1), cells)).__getitem__, system.alphabet)
                print(f"t={t} cells {render_window(view, rng[0], rng[1])}")
    return 0


class _View:
    """Minimal configuration stand-in over decoded cells."""

    def __init__(self, get, alphabet) -> None:
        self.cell_at = get
        self.alphabet = alphabet


def _parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise DocumentError("--dump-range", f"expected LO:HI, got {text!r}") from None


TOY_FORMAT = "sigma-ca/rule"


def _toy_rule(doc: dict) -> LocalRule:
    kind = doc.get("kind")
    n = int(doc.get("alphabet", 2))
    if kind == "identity":
        return identity_rule(n, int(doc.get("radius", 1)))
    if kind == "shift":
        return shift_rule(n)
    if kind == "elementary":
        number = int(doc["number"])
        if not 0 <= number < 256:
            raise ValueError("elementary rule numbers are 0..255")
        return LocalRule(2, 1, lambda nb: (number >> (4 * nb[0] + 2 * nb[1] + nb[2])) & 1, name=f"elementary-{number}")
    raise ValueError(f"unknown toy rule kind {kind!r}")


def cmd_export(args) -> int:
    p = Path(args.artifact)
    if not p.exists():
        raise DocumentError(args.artifact, "no such file")
    doc = _parse_json(p.read_text(), args.artifact)
    bound = 2**args.max_table_bits if args.max_table_bits is not None else DEFAULT_TABLE_BOUND
    system = None
    if doc.get("format") == TOY_FORMAT:
        try:
            rule = _toy_rule(doc)
        except (KeyError, ValueError) as exc:
            raise DocumentError(args.artifact, str(exc)) from None
    else:
        system = load_artifact(args.artifact)
        rule = system.rule
    if args.binary:
        rule, code = recode_binary(rule)
    try:
        text = export_table(rule, bound)
    except TableTooLarge as exc:
        print(f"TableTooLarge: {exc}", file=sys.stderr)
        desc = rule_description(system) if system is not None else {"kind": rule.name}
        desc.update(alphabet=rule.alphabet_size, radius=rule.radius, entries=exc.entries, bound=exc.bound)
        if args.binary:
            desc["binary"] = {"codewordLength": code.L, "codeword": "1110 d1 0 d2 0 ... dk 0"}
        _emit(json.dumps(desc, indent=1, sort_keys=True) + "\n", args.output)
        return EXIT_TABLE_TOO_LARGE
    _emit(text, args.output)
    return 0


def _emit(text: str, output: str | None) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


# ---------------------------------------------------------------------------


def _binary_word(text: str) -> str:
    if any(ch not in "01" for ch in text):
        raise argparse.ArgumentTypeError(f"{text!r} is not a word over {{0,1}}")
    return text


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigma-ca",
        description="Reduction automata for asymptotic and nonwandering languages.",
        epilog="Environment: SIGMA_CA_FUEL overrides the default step budget.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a system document into an artifact")
    p.add_argument("document", help="system document (JSON) or bundled name: " + ", ".join(bundled_systems()))
    p.add_argument("-o", "--output", required=True, help="artifact path, '-' for stdout")
    p.set_defaults(func=cmd_compile)

    def sim_flags(q):
        q.add_argument("--fuel", type=_nonneg, help="CA steps per run")
        q.add_argument("--mode", choices=("witness", "search"))
        q.add_argument("--witness", help="witness JSON (inline or file): {cSet, skolem[, c]}")
        q.add_argument("--max-period", type=_nonneg, help="search mode: longest b-track period")

    p = sub.add_parser("classify", help="classify words through the automaton")
    p.add_argument("artifact")
    p.add_argument("words", nargs="*", type=_binary_word)
    p.add_argument("--all-up-to", type=_nonneg, metavar="N", help="every word of length <= N")
    p.add_argument("--length", type=_nonneg, metavar="N", help="every word of length exactly N")
    p.add_argument("--min-recurrences", type=_nonneg)
    p.add_argument("--jobs", type=_nonneg, default=1)
    p.add_argument("--jsonl", action="store_true", help="one JSON record per word")
    sim_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("trace", help="print the event stream of one run")
    p.add_argument("artifact")
    p.add_argument("word", type=_binary_word)
    p.add_argument("--dump-every", type=_nonneg, metavar="K")
    p.add_argument("--dump-range", metavar="LO:HI", help="cells to dump; write --dump-range=-1:6 when LO is negative")
    p.add_argument("--window", type=_nonneg, metavar="K", help="report returns of cells [-K, K]")
    p.add_argument("--stop-on-spread", action="store_true")
    p.add_argument("--binary", action="store_true", help="trace the binary recoding")
    sim_flags(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("export", help="write the rule table")
    p.add_argument("artifact", help="compiled system or toy rule document")
    p.add_argument("--binary", action="store_true")
    p.add_argument("--max-table-bits", type=_nonneg, help="largest table is 2^BITS entries (default 20)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "window", None) == 0:
            parser.error("--window must be >= 1")
        return args.func(args)
    except (DocumentError, IllFormedMachine, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
