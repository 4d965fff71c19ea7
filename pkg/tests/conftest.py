import numpy as np
import pytest

from subspace_star.numerics import projector_onto_columns


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def random_projector(d, rng, rank=None):
    if rank is None:
        rank = int(rng.integers(0, d + 1))
    if rank == 0:
        return np.zeros((d, d), dtype=complex)
    Z = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    return projector_onto_columns(Z)


def random_hermitian(n, rng):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (Z + Z.conj().T) / 2


def random_spd(n, rng):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return Z @ Z.conj().T + 0.1 * np.eye(n)


# One PASS/FAIL line per acceptance criterion, echoed again in the terminal summary.
ACCEPTANCE_LINES = []


def record_acceptance(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
