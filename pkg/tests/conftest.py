from __future__ import annotations

import pytest

from sigma_ca.ca_compiler import build_reduction_ca
from sigma_ca.guest_machines import CheckerVariant
from sigma_ca.predicates import FAMILIES

_SYSTEMS: dict = {}


def system_for(family: str, variant: str = "unary"):
    """Compiled reduction system, cached across the whole session."""
    key = (family, variant)
    if key not in _SYSTEMS:
        _SYSTEMS[key] = build_reduction_ca(FAMILIES[family].build(), CheckerVariant(variant))
    return _SYSTEMS[key]


@pytest.fixture(scope="session")
def systems():
    return system_for


@pytest.fixture(scope="session")
def parity():
    return system_for("PARITY")


@pytest.fixture(scope="session")
def accept_all():
    return system_for("ALWAYS-ACCEPT")


@pytest.fixture(scope="session")
def reject_all():
    return system_for("ALWAYS-REJECT")


def pytest_terminal_summary(terminalreporter):
    from _report import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
