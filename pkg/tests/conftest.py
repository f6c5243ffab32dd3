import math

import pytest

from branchaudit.functions import PhaseParam

ACCEPTANCE = []


@pytest.fixture
def record():
    """Log one acceptance line; the test still asserts on its own."""

    def _record(criterion, ok, detail=""):
        ACCEPTANCE.append((criterion, bool(ok), detail))
        return ok

    return _record


@pytest.fixture
def phase():
    return PhaseParam(-math.pi / 4)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in sorted(ACCEPTANCE, key=lambda row: int(row[0].split()[0][2:])):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {criterion}  {detail}")
