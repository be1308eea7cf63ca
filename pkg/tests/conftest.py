import numpy as np
import pytest

from optimal_pac.learners import DEFAULT_TARGETS, ConceptClass, TargetSpec


@pytest.fixture(params=list(ConceptClass), ids=lambda c: c.value)
def spec(request):
    return TargetSpec(request.param, DEFAULT_TARGETS[request.param])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion; printed in the terminal summary."""
    def record(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
