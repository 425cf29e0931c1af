import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from framelets.pipeline import demo

ACCEPTANCE_LINES: list[str] = []


def signed_row_distance(P, B):
    """Max-abs distance between rows, minimized over sign: shape (len(P), len(B))."""
    P = np.atleast_2d(P)[:, None, :]
    B = np.atleast_2d(B)[None, :, :]
    return np.minimum(np.abs(P - B).max(axis=2), np.abs(P + B).max(axis=2))


def match_rows(P, B):
    """Best one-to-one matching of printed rows ``P`` to bank rows ``B`` up to sign.

    Returns ``(worst distance, assignment)``.
    """
    cost = signed_row_distance(P, B)
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max()), dict(zip(r.tolist(), c.tolist()))


@pytest.fixture(scope="session")
def banks():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = demo(name)
        return cache[name]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
