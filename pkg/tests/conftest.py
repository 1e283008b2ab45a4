import numpy as np
import pytest

from entshare.states import haar_random_pure, random_density, random_unitary


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_two_qubit_states(count, seed):
    """Mixed two-qubit states of every rank plus reductions of Haar pure states."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        if k % 5 == 4:
            out.append(haar_random_pure(int(rng.integers(3, 5)), rng).density().reduce([0, 1]))
        else:
            out.append(random_density(4, k % 4 + 1, rng))
    return out


def local_unitary(n, rng):
    u = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        u = np.kron(u, random_unitary(2, rng))
    return u


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion; echoed in the terminal summary."""

    def emit(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
