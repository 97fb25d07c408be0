import random
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from comodlim.coalg import corpus
from comodlim.exactlin import RationalMatrix

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def M(rows, cols=None):
    return RationalMatrix.from_rows(rows, cols=cols)


def col(*xs):
    return RationalMatrix.column_vector(list(xs))


@pytest.fixture(scope="session")
def coalgebras():
    return corpus()


@pytest.fixture
def rng():
    return random.Random(1234)


def fractions_of(m):
    return [[Fraction(x) for x in row] for row in m.to_rows()]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
