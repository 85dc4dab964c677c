import logging

import numba
import numpy as np

from hitmix.errors import SimulationError
from hitmix.graph.core import reachable_from
from hitmix.schemas.graph_data import Graph, SeedSet

# Set up logging
logger = logging.getLogger(__name__)


@numba.njit
def _walk_lengths(indptr, indices, cumulative_weights, degrees, is_seed, start, n_walks, max_steps, seed):
    """Hitting time of each walk, -1 when the walk was cut off at max_steps."""
    np.random.seed(seed)
    lengths = np.empty(n_walks, dtype=np.int64)
    for w in range(n_walks):
        v = start
        steps = 0
        while not is_seed[v]:
            if steps >= max_steps:
                steps = -1
                break
            lo, last = indptr[v], indptr[v + 1] - 1
            u = np.random.random() * degrees[v]
            # first k with cumulative_weights[k] > u
            while lo < last:
                mid = (lo + last) // 2
                if cumulative_weights[mid] > u:
                    last = mid
                else:
                    lo = mid + 1
            v = indices[lo]
            steps += 1
        lengths[w] = steps
    return lengths


def simulate_hitting_times(
    graph: Graph,
    seeds: SeedSet,
    start_vertex: int,
    n_walks: int,
    max_steps: int,
    rng_seed: int,
) -> tuple[float, float, int]:
    """Monte Carlo hitting-time mean and variance from one start vertex.

    Walks step to a neighbor chosen with probability proportional to edge
    multiplicity. Returns NaN moments when every walk is truncated.
    """
    if not 0 <= start_vertex < graph.n_vertices:
        raise SimulationError(f"start vertex {start_vertex} outside [0, {graph.n_vertices})")
    if start_vertex in seeds.members:
        raise SimulationError(f"start vertex {start_vertex} is a seed")
    if n_walks < 1:
        raise SimulationError(f"n_walks must be at least 1, got {n_walks}")
    report = reachable_from(graph, seeds)
    position = np.searchsorted(report.vertices, start_vertex)
    if not report.reachable[position]:
        raise SimulationError(f"start vertex {start_vertex} cannot reach the seed set")

    adjacency = graph.adjacency
    running = np.cumsum(adjacency.data, dtype=np.float64)
    row_offsets = np.concatenate([[0.0], running])[adjacency.indptr[:-1]]
    cumulative = running - np.repeat(row_offsets, np.diff(adjacency.indptr))
    is_seed = np.zeros(graph.n_vertices, dtype=np.bool_)
    is_seed[seeds.member_array()] = True

    lengths = _walk_lengths(
        adjacency.indptr.astype(np.int64),
        adjacency.indices.astype(np.int64),
        cumulative,
        graph.degrees.astype(np.float64),
        is_seed,
        int(start_vertex),
        int(n_walks),
        int(max_steps),
        int(rng_seed),
    )

    finished = lengths[lengths >= 0].astype(np.float64)
    truncated = n_walks - len(finished)
    if truncated:
        logger.warning(f"{truncated} of {n_walks} walks from vertex {start_vertex} exceeded {max_steps} steps")
    if len(finished) == 0:
        return float("nan"), float("nan"), truncated
    variance = float(finished.var(ddof=1)) if len(finished) > 1 else 0.0
    return float(finished.mean()), variance, truncated
