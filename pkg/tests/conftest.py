import numpy as np
import pytest

from sznagy import reference_data
from sznagy.channels import DephasingParams

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def dephasing_params():
    return DephasingParams(1.4, 1.5, 2.0)


@pytest.fixture(scope="session")
def mfgp_renormalized():
    return reference_data.mfgp_kraus().renormalized()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
