import functools

import numpy as np
import pytest

from fermictx.jw import Direction


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_direction(rng) -> Direction:
    return Direction(float(rng.uniform(0, np.pi)), float(rng.uniform(-np.pi, np.pi)))


# ---------------------------------------------------------------------------
# independent Kronecker-product oracle for the ladder operators
#
# The pattern index puts mode 1 in the least significant bit, so in np.kron
# order mode M is the leftmost factor and mode 1 the rightmost.

_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)    # |0><1| on (empty, occupied)
_PARITY = np.diag([1.0, -1.0]).astype(complex)         # 1 - 2n


@functools.lru_cache(maxsize=None)
def kron_annihilation(j: int, M: int) -> np.ndarray:
    factors = []
    for mode in range(M, 0, -1):
        if mode > j:
            factors.append(np.eye(2))
        elif mode == j:
            factors.append(_LOWER)
        else:
            factors.append(_PARITY)
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def kron_creation(j: int, M: int) -> np.ndarray:
    return kron_annihilation(j, M).conj().T


def kron_expectation(psi_qubit: np.ndarray, mats) -> complex:
    """<psi| (x)_j mats[j] |psi> with mode 1 the leftmost factor."""
    op = np.ones((1, 1), dtype=complex)
    for m in mats:
        op = np.kron(op, m)
    return complex(np.vdot(psi_qubit, op @ psi_qubit))


# ---------------------------------------------------------------------------
# acceptance summary: one PASS/FAIL line per criterion after the run

_ACCEPTANCE: dict = {}


@pytest.fixture
def acceptance():
    def record(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
        _ACCEPTANCE[number] = line
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
