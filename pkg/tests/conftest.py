import numpy as np
import pytest

from helpers import SEED


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def paulis():
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]])
    z = np.diag([1.0, -1.0]).astype(complex)
    return x, y, z


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
