import numpy as np
import pytest

from imqfast import halton2d

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def halton_500():
    return halton2d(500)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def brute_force_cover(points, L):
    """Count coverage of every ordered pair from cell geometry alone, for the unit square."""
    def cheb(a):
        return np.max(np.abs(a[:, None, :] - a[None, :, :]), axis=-1)

    cells = [np.minimum(np.floor(points * 2 ** (l + 1)).astype(int), 2 ** (l + 1) - 1) for l in range(1, L + 1)]
    counts = np.zeros((len(points),) * 2, dtype=int)
    for l, c in enumerate(cells):
        separated = cheb(c) >= 2
        if l > 0:
            separated &= cheb(c // 2) <= 1
        counts += separated
    counts += cheb(cells[-1]) <= 1
    return counts


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
