import math
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from hedgebr.game import Game

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

INTERIOR = ((-2, 1, 3), (1, 2, -2), (2, 0, -1))
NONINTERIOR = ((-2, 1, 3), (1, -1, 2), (0, 2, -1))
CYCLE_NO_ASSUMPTIONS = ((2, -1, 0), (-1, 1, -2), (-3, -2, 1))
MATCHING_PENNIES = ((1, -1), (-1, 1))

X_STAR = (Fraction(3, 8), Fraction(1, 24), Fraction(7, 12))
Y_STAR = (Fraction(3, 8), Fraction(1, 3), Fraction(7, 24))
VALUE = Fraction(11, 24)

ETA_FIXED = math.log(3) / 625


@pytest.fixture
def interior():
    return Game(INTERIOR)


@pytest.fixture
def noninterior():
    return Game(NONINTERIOR)


@pytest.fixture
def cyc():
    return Game(CYCLE_NO_ASSUMPTIONS)


@pytest.fixture
def pennies():
    return Game(MATCHING_PENNIES)


@pytest.fixture
def sqrt2_game():
    return Game(((-2, math.sqrt(2), 3), (1, 2, -2), (2, 0, -1)))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
