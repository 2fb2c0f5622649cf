import numpy as np
import pytest

SQ2 = np.sqrt(2)

# maximally coherent qubit witness and its mirror; W1 + W2 = 0
W1 = np.array([[0, -0.5], [-0.5, 0]], dtype=complex)
W2 = np.array([[0, 0.5], [0.5, 0]], dtype=complex)
# imaginary partner of W1; shares detected states with it
W3 = np.array([[0, 0.5j], [-0.5j, 0]], dtype=complex)

PLUS = np.full((2, 2), 0.5, dtype=complex)
MINUS = np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
