import logging

import networkx as nx
import numpy as np

from hitmix.errors import SeedSetError
from hitmix.graph.core import graph_from_edges, make_seed_set
from hitmix.schemas.graph_data import Graph, SeedSet
from hitmix.schemas.sbm_data import SbmConfig

# Set up logging
logger = logging.getLogger(__name__)


def sample_sbm(cfg: SbmConfig, rng: np.random.Generator) -> tuple[Graph, np.ndarray]:
    """Simple undirected SBM graph; vertex v belongs to block v // block_size."""
    sizes = [cfg.block_size] * cfg.n_blocks
    probabilities = np.full((cfg.n_blocks, cfg.n_blocks), cfg.p_out)
    np.fill_diagonal(probabilities, cfg.p_in)
    sampled = nx.stochastic_block_model(
        sizes,
        probabilities.tolist(),
        seed=int(rng.integers(2**32)),
        sparse=True,
    )
    edges = np.array(sorted(sampled.edges()), dtype=np.int64).reshape(-1, 2)
    labels = np.arange(cfg.n_vertices) // cfg.block_size
    graph = graph_from_edges(cfg.n_vertices, edges)
    logger.debug(f"Sampled SBM with {cfg.n_blocks} blocks and {graph.n_edges} edges")
    return graph, labels


def sample_hitting_set(block_labels: np.ndarray, goal_block: int, size: int, rng: np.random.Generator) -> SeedSet:
    goal_vertices = np.flatnonzero(np.asarray(block_labels) == goal_block)
    if size < 1 or size > len(goal_vertices):
        raise SeedSetError(f"hitting set size {size} outside [1, {len(goal_vertices)}]")
    members = rng.choice(goal_vertices, size=size, replace=False)
    return make_seed_set(members.tolist(), len(block_labels))
