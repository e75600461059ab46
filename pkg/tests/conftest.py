from fractions import Fraction as F

import pytest

from artifact.observed import from_joint

# Acceptance lines collected during the run and echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def record(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def worked_example(exact=True):
    """Two-arm distribution used throughout the examples, cells keyed (y, b, a)."""
    cells = {
        (0, 0, 0): "0.35", (1, 0, 0): "0.20", (0, 1, 0): "0.30", (1, 1, 0): "0.15",
        (0, 0, 1): "0.40", (1, 0, 1): "0.10", (0, 1, 1): "0.35", (1, 1, 1): "0.15",
    }
    conv = F if exact else float
    return from_joint({k: conv(v) for k, v in cells.items()})


@pytest.fixture
def example_obs():
    return worked_example()


@pytest.fixture
def example_obs_float():
    return worked_example(exact=False)
