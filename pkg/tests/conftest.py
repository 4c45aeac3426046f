import sys

import pytest

from stablepar.mc import model1_preset, model2_preset
from stablepar.rng import RandomStream


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance criteria's pass/fail lines after the test run."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def model1():
    return model1_preset()


@pytest.fixture(scope="session")
def model2():
    return model2_preset()


@pytest.fixture()
def stream():
    return RandomStream(20260822)
