import numpy as np
import pytest

from asymmetry import linalg, quantum


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_psd(d, rng):
    return quantum.random_state(d, rng).matrix


def random_matrix(d, rng, cols=None):
    cols = d if cols is None else cols
    return rng.standard_normal((d, cols)) + 1j * rng.standard_normal((d, cols))


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
