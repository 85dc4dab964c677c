import logging
from collections import Counter
from typing import Iterable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from hitmix.errors import GraphFormatError, SeedSetError
from hitmix.io.inputs import numbered_lines
from hitmix.schemas.graph_data import Graph, NonSeedIndex, ReachabilityReport, SeedSet

# Set up logging
logger = logging.getLogger(__name__)


def graph_from_edges(n_vertices: int, edges: np.ndarray, multiplicities: np.ndarray | None = None) -> Graph:
    """Build a Graph from unordered (u, v) pairs; each pair must appear once."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if multiplicities is None:
        multiplicities = np.ones(len(edges), dtype=np.int64)
    multiplicities = np.asarray(multiplicities, dtype=np.int64)

    if len(edges) and (edges.min() < 0 or edges.max() >= n_vertices):
        raise GraphFormatError(f"edge endpoint outside [0, {n_vertices})")

    u, v = edges[:, 0], edges[:, 1]
    loops = u == v
    rows = np.concatenate([u, v[~loops]])
    cols = np.concatenate([v, u[~loops]])
    data = np.concatenate([np.where(loops, 2 * multiplicities, multiplicities), multiplicities[~loops]])

    adjacency = sp.coo_matrix((data, (rows, cols)), shape=(n_vertices, n_vertices)).tocsr()
    adjacency.sum_duplicates()
    adjacency.sort_indices()
    degrees = np.asarray(adjacency.sum(axis=1)).ravel().astype(np.int64)

    return Graph(n_vertices=n_vertices, adjacency=adjacency, degrees=degrees)


def _parse_vertex_pair(line: str, line_number: int) -> tuple[int, int]:
    tokens = line.split()
    if len(tokens) != 2:
        raise GraphFormatError(f"expected two vertex ids, found {len(tokens)} tokens", line_number)
    try:
        u, v = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise GraphFormatError(f"non-integer vertex id in {line.strip()!r}", line_number)
    if u < 0 or v < 0:
        raise GraphFormatError(f"negative vertex id in {line.strip()!r}", line_number)
    return u, v


def load_edge_list(stream: Iterable[str | bytes]) -> Graph:
    """Read a SNAP-style edge list: '#' comments, one 'u v' pair per line.

    (u, v) and (v, u) name the same edge; repeated pairs accumulate multiplicity.
    """
    counts: Counter[tuple[int, int]] = Counter()
    for line_number, line in numbered_lines(stream):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        u, v = _parse_vertex_pair(stripped, line_number)
        counts[(min(u, v), max(u, v))] += 1

    if not counts:
        raise GraphFormatError("edge list contains no edges")

    pairs = sorted(counts)
    edges = np.array(pairs, dtype=np.int64)
    multiplicities = np.array([counts[p] for p in pairs], dtype=np.int64)
    n_vertices = int(edges.max()) + 1

    graph = graph_from_edges(n_vertices, edges, multiplicities)
    logger.info(f"Loaded graph with {graph.n_vertices} vertices and {graph.n_edges} edges")
    return graph


def load_seed_file(stream: Iterable[str | bytes]) -> list[int]:
    seeds = []
    for line_number, line in numbered_lines(stream):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            seeds.append(int(stripped))
        except ValueError:
            raise GraphFormatError(f"non-integer seed id {stripped!r}", line_number)
    logger.info(f"Loaded {len(seeds)} seed ids")
    return seeds


def make_seed_set(members: Iterable[int], n_vertices: int) -> SeedSet:
    members = frozenset(int(v) for v in members)
    if not members:
        raise SeedSetError("seed set is empty")
    out_of_range = [v for v in members if v < 0 or v >= n_vertices]
    if out_of_range:
        raise SeedSetError(f"seed ids outside [0, {n_vertices}): {sorted(out_of_range)[:10]}")
    mask = np.ones(n_vertices, dtype=bool)
    mask[list(members)] = False
    complement = np.flatnonzero(mask)
    if len(complement) == 0:
        raise SeedSetError("seed set covers every vertex")
    return SeedSet(n_vertices=n_vertices, members=members, complement=complement)


def build_nonseed_index(graph: Graph, seeds: SeedSet) -> NonSeedIndex:
    if not seeds.members:
        raise SeedSetError("seed set is empty")
    if seeds.n_vertices != graph.n_vertices or max(seeds.members) >= graph.n_vertices:
        raise SeedSetError(
            f"seed set built for {seeds.n_vertices} vertices does not fit a graph with {graph.n_vertices}"
        )
    local_to_global = np.array(seeds.complement, dtype=np.int64)
    global_to_local = np.full(graph.n_vertices, -1, dtype=np.int64)
    global_to_local[local_to_global] = np.arange(len(local_to_global))
    return NonSeedIndex(global_to_local=global_to_local, local_to_global=local_to_global)


def reachable_from(graph: Graph, seeds: SeedSet) -> ReachabilityReport:
    """Mark each non-seed vertex by whether some path joins it to the seed set."""
    _, component = connected_components(graph.adjacency, directed=False)
    seed_components = np.unique(component[seeds.member_array()])
    vertices = np.array(seeds.complement, dtype=np.int64)
    reachable = np.isin(component[vertices], seed_components)
    unreachable_count = int((~reachable).sum())
    if unreachable_count:
        logger.warning(f"{unreachable_count} non-seed vertices cannot reach the seed set")
    return ReachabilityReport(vertices=vertices, reachable=reachable, unreachable_count=unreachable_count)
