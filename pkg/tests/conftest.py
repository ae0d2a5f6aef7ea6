import numpy as np
import pytest
from hypothesis import settings

from diskeit.fields import sigma_exact
from diskeit.forward import CurrentPattern, solve_forward
from diskeit.quadrature import build_disk_rule

settings.register_profile("default", deadline=None, max_examples=30, derandomize=True)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def rule():
    return build_disk_rule()


@pytest.fixture(scope="session")
def small_rule():
    return build_disk_rule(16, 64)


@pytest.fixture(scope="session")
def exact_m1(rule):
    return solve_forward(sigma_exact(), CurrentPattern(1), rule)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
