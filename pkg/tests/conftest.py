import random
from fractions import Fraction

import pytest

from treekkm import MetricTree, TreePoint


@pytest.fixture
def rng():
    return random.Random(20240607)


@pytest.fixture
def path3():
    """Path 0 - 1 - 2 with unit edges."""
    return MetricTree(3, [(0, 1, 1), (1, 2, 1)])


@pytest.fixture
def unit_edge():
    return MetricTree(2, [(0, 1, 1)])


def V(v):
    return TreePoint(vertex=v)


def half(t, edge):
    return t.edge_point(edge, t.edges[edge].length / 2)


F = Fraction
