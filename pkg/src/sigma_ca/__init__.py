"""Cellular automata whose asymptotic and nonwandering languages encode analytic predicates.

Pipeline: a predicate program is wrapped into a checker machine
(:mod:`~sigma_ca.guest_machines`), compiled into a cellular automaton with a
spreading state on a structured subshift (:mod:`~sigma_ca.ca_compiler`),
simulated exactly on lazily materialized configurations
(:mod:`~sigma_ca.simulator`) and used to classify words
(:mod:`~sigma_ca.harness`).
"""

from __future__ import annotations

from .ca_compiler import ReductionSystem, build_reduction_ca, embed_tm, phi
from .core_model import SPREAD, CellAlphabet, Configuration, LocalRule, Main, TrackedCell
from .guest_machines import (
    CheckerVariant,
    IllFormedMachine,
    PredicateProgram,
    TMConfig,
    TMSpec,
    build_checker,
    eval_predicate_direct,
    tm_run,
    tm_step,
)
from .harness import brute_force_oracle, classify_word, sample_language
from .predicates import FAMILIES, load_bundled
from .recoding import SubstitutionCode, recode_binary
from .simulator import detect_signaling, run_trace, step, window_recurrences

__version__ = "0.1.0"

__all__ = [
    "CellAlphabet",
    "CheckerVariant",
    "Configuration",
    "FAMILIES",
    "IllFormedMachine",
    "LocalRule",
    "Main",
    "PredicateProgram",
    "ReductionSystem",
    "SPREAD",
    "SubstitutionCode",
    "TMConfig",
    "TMSpec",
    "TrackedCell",
    "brute_force_oracle",
    "build_checker",
    "build_reduction_ca",
    "classify_word",
    "detect_signaling",
    "embed_tm",
    "eval_predicate_direct",
    "load_bundled",
    "phi",
    "recode_binary",
    "run_trace",
    "sample_language",
    "step",
    "tm_run",
    "tm_step",
    "window_recurrences",
]
