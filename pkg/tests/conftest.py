import os

import pytest
from hypothesis import HealthCheck, settings

from k3rm.numfield import NumberField

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("ci", deadline=None, max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CUBIC = [1, -3, 0, 1]  # X^3 - 3X + 1, cyclic, totally real


@pytest.fixture(scope="session")
def Q():
    return NumberField.rationals()


@pytest.fixture(scope="session")
def Q2():
    return NumberField.quadratic(2)


@pytest.fixture(scope="session")
def Q5():
    return NumberField.quadratic(5)


@pytest.fixture(scope="session")
def cubic():
    return NumberField.from_poly(CUBIC)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
