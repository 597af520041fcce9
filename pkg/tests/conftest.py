import numpy as np
import pytest

from oscnet.generators import random_graph


def random_symmetric(n, seed, p=0.3):
    return random_graph(n, p=p, seed=seed)


def random_directed(n, seed, p=0.3):
    return random_graph(n, p=p, seed=seed, directed=True)


def rel_max(a, b):
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
