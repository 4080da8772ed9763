import pytest

from modeqaoa.graph import (
    MaxCutInstance, assign_weights, complete_graph, random_regular, with_optimum,
)


@pytest.fixture
def triangle():
    # K3, unit weights; optimum cut 2 at any 1-vs-2 split
    return with_optimum(complete_graph(3))


@pytest.fixture
def square():
    # 4-cycle, optimum cut 4 at alternating split
    return with_optimum(MaxCutInstance.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0),
                                                      (2, 3, 1.0), (0, 3, 1.0)]))


@pytest.fixture
def six_reg():
    return with_optimum(assign_weights(random_regular(6, 3, seed=7), "unit", 0))


@pytest.fixture
def petersen():
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
             (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
             (0, 5), (1, 6), (2, 7), (3, 8), (4, 9)]
    return MaxCutInstance.from_edges(10, [(u, v, 1.0) for u, v in edges])
