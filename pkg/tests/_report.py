"""Acceptance results collected during the run and printed in the terminal summary."""

from __future__ import annotations

RESULTS: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> None:
    line = f"{criterion} {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS.append(line)
    print(line)
