from pathlib import Path

import numpy as np
import pytest

from tensorloc import Tensor, row_sums

DATA = Path(__file__).parent / "data"

REMARK_ENTRIES = {
    (1, 1, 1): 12, (2, 2, 2): 14, (3, 3, 3): 8 + 1j, (4, 4, 4): 11,
    (1, 2, 2): 4 + 1j, (1, 4, 4): 15 - 1j, (2, 3, 3): 5 - 1j, (2, 1, 1): -2 - 1j,
    (3, 2, 2): 6, (3, 4, 4): 4, (4, 1, 1): 16, (4, 2, 2): 2,
}


@pytest.fixture(scope="session")
def remark():
    return Tensor(3, 4, REMARK_ENTRIES)


@pytest.fixture(scope="session")
def remark_sums(remark):
    return row_sums(remark)


@pytest.fixture(scope="session")
def remark_path():
    return DATA / "remark21.txt"


def remark_linear_eigenvalues():
    """Every entry of the example has the form a_{ijj}, so A x^2 = M x^[2] with
    M[i, j] = a_{ijj}; its eigenvalues are the matrix eigenvalues of M."""
    M = np.zeros((4, 4), dtype=complex)
    for (i, j, k), v in REMARK_ENTRIES.items():
        assert j == k
        M[i - 1, j - 1] = v
    return np.linalg.eigvals(M)


def random_tensor(rng, m, n, boost=1.0):
    shape = (n,) * m
    T = np.sqrt(rng.uniform(size=shape)) * np.exp(2j * np.pi * rng.uniform(size=shape))
    for i in range(n):
        T[(i,) * m] *= boost
    return Tensor.from_dense(T)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
