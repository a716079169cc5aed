import numpy as np
import pytest

import rstsent
from rstsent.features import read_lexicon
from rstsent.rst_tree import read_rst_file
from rstsent.synthetic import random_tree

# filled by the acceptance tests, echoed in the terminal summary
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture
def samurai_tree():
    return read_rst_file(rstsent.example_path("samurai_review.rst.sexp"))


@pytest.fixture
def samurai_lexicon():
    with open(rstsent.example_path("samurai_lexicon.tsv"), "rb") as fh:
        return read_lexicon(fh)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_bows(rng, n_edus, n_features, max_words=4):
    bows = []
    for _ in range(n_edus):
        bow = {}
        for j in rng.integers(0, n_features, size=rng.integers(0, max_words + 1)):
            bow[int(j)] = bow.get(int(j), 0) + 1
        bows.append(bow)
    return bows


def make_random_tree(rng, n_edus, **kw):
    return random_tree(rng, n_edus, **kw)
