import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tlg import Graph, RhcProgram, RhcStep, WeightAssignment, random_rhc, rhc_execute
from tlg.walks import make_rng

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

F = Fraction
EXAMPLE5_WEIGHTS = [[F(1, 2), F(1, 4), F(1, 4)], [F(1, 3)] * 3, [F(1, 4), F(1, 2), F(1, 4)]]


def random_tlg(n, rng, shuffle=True):
    g = rhc_execute(random_rhc(n, rng))
    if shuffle:
        g = g.relabel([int(x) for x in rng.permutation(n)])
    return g


def example5():
    return Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (1, 4), (2, 4)])


def example5_program():
    return RhcProgram((0, 1, 2), (RhcStep((0, 1), 3), RhcStep((1, 2), 4)))


@pytest.fixture
def ex5():
    return example5()


@pytest.fixture
def ex5_weights():
    return WeightAssignment.from_values(EXAMPLE5_WEIGHTS)


@pytest.fixture
def rng():
    return make_rng(20240601)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def triangle_graph():
    return Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])


def np_rng(seed):
    return np.random.default_rng(seed)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
