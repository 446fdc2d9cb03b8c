import numpy as np
import pytest
from hypothesis import strategies as st

from gwepi.harness import random_gw
from gwepi.states import GWState


@st.composite
def gw_states(draw, n=st.integers(2, 6), d=st.integers(2, 4)):
    """Random GW states from seeded Gaussian draws."""
    return random_gw(draw(n), draw(d), draw(st.integers(0, 2**32 - 1)))


@pytest.fixture
def w3():
    return GWState.uniform(3)


@pytest.fixture
def w4():
    return GWState.uniform(4)


@pytest.fixture
def skewed():
    # party weights 0.7, 0.2, 0.1
    return GWState.from_weights([0.7, 0.2, 0.1])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
