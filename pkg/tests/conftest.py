import numpy as np
import pytest

from holovolume import Coupling, compute_modes, make_gauss_legendre


@pytest.fixture(scope="session")
def gl200():
    return make_gauss_legendre(200)


@pytest.fixture(scope="session")
def modes4(gl200):
    """Full 200-mode basis at kappa = 4."""
    return compute_modes(Coupling(4.0), gl200)


@pytest.fixture(scope="session")
def modes25(gl200):
    return compute_modes(Coupling(25.0), gl200)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import ACCEPTANCE_LINES
    except ImportError:
        return
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
