import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def criterion():
    """Record one acceptance line, then assert."""

    def record(number, name, ok, detail, seconds=None, budget=None):
        timing = ""
        if seconds is not None:
            timing = f" [{seconds:.3f}s" + (f" / budget {budget:g}s]" if budget else "]")
            if budget is not None and seconds > budget:
                ok = False
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number} {name}: {detail}{timing}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
