import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from asakit.convex_body import Ball, Ellipsoid, cube, random_simplex, regular_simplex

settings.register_profile(
    "asakit",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("asakit")

ACCEPTANCE_LINES = {}


def record_acceptance(number, passed, detail):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture
def unit_ball():
    return Ball(np.zeros(3), 1.0)


@pytest.fixture
def ball2():
    return Ball(np.zeros(3), 2.0)


@pytest.fixture
def ell123():
    return Ellipsoid(np.array([1.0, 2.0, 3.0]))


@pytest.fixture
def unit_cube():
    return cube(3)


@pytest.fixture
def simplex():
    return regular_simplex(3)


@pytest.fixture
def rsimplex():
    return random_simplex(3, 0)
