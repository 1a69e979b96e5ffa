import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "wsim", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("wsim")

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
