import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from netres.graphs import (
    Graph,
    bidirectional_ring,
    complete_graph,
    directed_line,
    directed_star,
    edgeless,
    undirected_line,
    undirected_star,
)


@pytest.fixture
def star4() -> Graph:
    return directed_star(4)


@pytest.fixture
def line4() -> Graph:
    return directed_line(4)


@pytest.fixture
def uline4() -> Graph:
    return undirected_line(4)


@pytest.fixture
def ring5() -> Graph:
    return bidirectional_ring(5)


@pytest.fixture
def k3() -> Graph:
    return complete_graph(3)


@pytest.fixture
def pair() -> Graph:
    """Single directed edge 0 -> 1."""
    return directed_line(2)


@pytest.fixture
def upair() -> Graph:
    """Undirected pair 0 <-> 1."""
    return Graph(frozenset({0, 1}), frozenset({(0, 1), (1, 0)}))


def small_families(sizes=(3, 4, 5)):
    out = []
    for n in sizes:
        out += [
            directed_star(n),
            directed_line(n),
            undirected_line(n),
            undirected_star(n),
            bidirectional_ring(n),
            complete_graph(n),
            edgeless(n),
        ]
    return out
