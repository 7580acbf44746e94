import pytest

from kplexpart.graph import WeightedGraph

from helpers import DATA_DIR, clique


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def path3():
    # 1 - 2 - 3 with weights 5, 5
    return WeightedGraph(3, [(1, 2, 5), (2, 3, 5)])


@pytest.fixture
def triangle():
    return clique(3)


@pytest.fixture
def cycle4():
    return WeightedGraph(4, [(1, 2, 1), (2, 3, 1), (3, 4, 1), (1, 4, 1)])


@pytest.fixture
def star():
    # center 1 adjacent to 2, 3, 4
    return WeightedGraph(4, [(1, 2, 1), (1, 3, 1), (1, 4, 1)])


@pytest.fixture
def signed_graph():
    # Two positive triangles joined by a light positive edge and a heavy negative one
    edges = [
        (1, 2, 10),
        (1, 3, 8),
        (2, 3, 6),
        (4, 5, 7),
        (4, 6, 9),
        (5, 6, 4),
        (3, 4, 2),
        (2, 5, -20),
    ]
    return WeightedGraph(6, edges)


@pytest.fixture
def edge_list_text() -> str:
    return "# small test graph\n4\n1 2 3\n2 3 -1.5\n3 4 2\nq 1 2\nq 4 0.5\n"


@pytest.fixture
def dimacs_text() -> str:
    return "c small test graph\np edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n"
