from __future__ import annotations

from pathlib import Path

import pytest

from cartan_lab import RATIONAL, FieldDescriptor, GeneratorSet, SLMatrix

SPECS = Path(__file__).resolve().parents[1] / "specs"

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def specs_dir() -> Path:
    return SPECS


@pytest.fixture(scope="session")
def sanov() -> GeneratorSet:
    a = SLMatrix([[1, 2], [0, 1]], RATIONAL)
    b = SLMatrix([[1, 0], [2, 1]], RATIONAL)
    return GeneratorSet(FieldDescriptor.padic(2), 2, (a, b))


@pytest.fixture(scope="session")
def sanov_real() -> GeneratorSet:
    a = SLMatrix([[1, 2], [0, 1]], RATIONAL)
    b = SLMatrix([[1, 0], [2, 1]], RATIONAL)
    return GeneratorSet(FieldDescriptor.real(), 2, (a, b))


@pytest.fixture
def record():
    """Log one PASS/FAIL line for an acceptance criterion and return the verdict."""

    def _record(number: int, title: str, ok: bool, elapsed: float, budget: float | None, detail: str = "") -> bool:
        within = budget is None or elapsed < budget
        status = "PASS" if ok and within else "FAIL"
        timing = f"{elapsed:.2f}s" if budget is None else f"{elapsed:.2f}s of {budget:g}s"
        line = f"{status} criterion {number:>2}: {title} [{timing}]"
        if detail:
            line += f" {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok and within

    return _record
