import numpy as np
import pytest

from nucleus import Decomposition


def random_decomposition(rng, n_terms, rows, cols, unit_phi=False):
    ell = rng.standard_normal((n_terms, cols))
    phi = rng.standard_normal((n_terms, rows))
    if unit_phi:
        phi /= np.linalg.norm(phi, axis=1, keepdims=True)
    return Decomposition(ell, phi, (rows, cols))


def rel_entrywise(a, b):
    """max |a - b| relative to max |b| (absolute when b is zero)."""
    a, b = np.asarray(a), np.asarray(b)
    scale = np.max(np.abs(b)) if b.size and np.any(b) else 1.0
    return float(np.max(np.abs(a - b)) / scale) if a.size else 0.0


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
