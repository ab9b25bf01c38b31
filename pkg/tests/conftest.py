from __future__ import annotations

import pytest

from pathforge.dataset import bundled, load_dataset
from pathforge.pathway import run_pathway

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def toy_model():
    return load_dataset(bundled("toy"))


@pytest.fixture(scope="session")
def toy_result(toy_model):
    return run_pathway(toy_model)


@pytest.fixture(scope="session")
def desk_model():
    return load_dataset(bundled("desk"))


@pytest.fixture
def acceptance():
    """Record the outcome of one acceptance criterion for the summary."""
    def record(number: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE[number] = (bool(ok), detail)
        print(_line(number, bool(ok), detail))
        return ok
    return record


def _line(number: int, ok: bool, detail: str) -> str:
    return f"acceptance {number}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 10):
        if n in ACCEPTANCE:
            terminalreporter.write_line(_line(n, *ACCEPTANCE[n]))
        else:
            terminalreporter.write_line(f"acceptance {n}: NOT RUN")
