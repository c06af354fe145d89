import numpy as np
import pytest

from strip_poisson.stripfield import StripGrid


@pytest.fixture(scope="session")
def grid_fine():
    return StripGrid(32, 8.0, 1025)


@pytest.fixture(scope="session")
def grid_small():
    return StripGrid(16, 6.0, 385)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import SUMMARY
    except ImportError:
        return
    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in SUMMARY:
            terminalreporter.write_line(line)
