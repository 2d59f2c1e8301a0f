import numpy as np
import pytest

from hypaffine import harness
from hypaffine.bodies.hyper import recenter
from hypaffine.quad import make_grid

CORPUS_SEED = {2: 20261015, 3: 20261016}
CORPUS_SIZE = 50

# lines appended by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def grids():
    return {n: make_grid(n) for n in (2, 3)}


@pytest.fixture(scope="session")
def corpus(grids):
    return {n: harness.random_corpus(n, CORPUS_SIZE, CORPUS_SEED[n], grids[n]) for n in (2, 3)}


@pytest.fixture(scope="session")
def centered_corpus(corpus, grids):
    return {n: [recenter(K, grids[n]) for K in corpus[n]] for n in (2, 3)}
