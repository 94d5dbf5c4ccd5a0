import pytest
from hypothesis import settings

settings.register_profile("default", derandomize=True, deadline=None)
settings.load_profile("default")

from qfamily.finsemigroup import CayleyTable

Z2 = CayleyTable.from_rows([[0, 1], [1, 0]])
LEFT_ZERO = CayleyTable.from_rows([[0, 0], [1, 1]])
MONOID3 = CayleyTable.from_rows([[0, 1, 2], [1, 1, 2], [2, 2, 2]])
NONASSOC = CayleyTable.from_rows([[0, 1], [0, 0]])

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture
def z2():
    return Z2


@pytest.fixture
def left_zero():
    return LEFT_ZERO


@pytest.fixture
def monoid3():
    return MONOID3


@pytest.fixture
def nonassoc():
    return NONASSOC


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
