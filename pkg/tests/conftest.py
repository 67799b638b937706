import numpy as np
import pytest

from oracles import ket, proj, random_density_matrices

ACCEPTANCE_LINES = []


@pytest.fixture
def bell_psi():
    return proj((ket("00") + ket("11")) / np.sqrt(2))


@pytest.fixture
def singlet():
    return proj((ket("10") - ket("01")) / np.sqrt(2))


@pytest.fixture
def mixed():
    return np.eye(4, dtype=complex) / 4


@pytest.fixture
def random_states():
    return random_density_matrices(np.random.default_rng(20240611), 2000)


@pytest.fixture
def record_acceptance():
    def record(label, ok, detail):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
