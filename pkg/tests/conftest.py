import networkx as nx
import numpy as np
import pytest

from hitmix.graph.core import graph_from_edges, make_seed_set


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run SBM trend, moment oracle and scalability tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def path3():
    """0 - 1 - 2 with seed {2}: E T = [4, 3], Var T = [8, 8]."""
    graph = graph_from_edges(3, [(0, 1), (1, 2)])
    return graph, make_seed_set([2], 3)


@pytest.fixture
def star():
    """Center 0 is the seed; every leaf hits it in exactly one step."""
    graph = graph_from_edges(6, [(0, leaf) for leaf in range(1, 6)])
    return graph, make_seed_set([0], 6)


@pytest.fixture
def triangle():
    return graph_from_edges(3, [(0, 1), (1, 2), (0, 2)])


def connected_er_graph(n: int, p: float, seed: int):
    """Erdos-Renyi graph resampled until connected."""
    for attempt in range(100):
        sampled = nx.gnp_random_graph(n, p, seed=seed + attempt)
        if nx.is_connected(sampled):
            return graph_from_edges(n, np.array(sorted(sampled.edges())))
    raise RuntimeError(f"no connected G({n}, {p}) within 100 draws")


@pytest.fixture
def er_graph():
    return connected_er_graph(40, 0.15, seed=7)


def dense_moments(graph, seeds):
    """First two hitting-time moments from dense linear solves of the first-step equations."""
    adjacency = graph.adjacency.toarray().astype(float)
    transition = adjacency / graph.degrees[:, None]
    free = np.array(seeds.complement)
    block = transition[np.ix_(free, free)]
    system = np.eye(len(free)) - block
    first = np.linalg.solve(system, np.ones(len(free)))
    second = np.linalg.solve(system, np.ones(len(free)) + 2 * block @ first)
    return first, second
