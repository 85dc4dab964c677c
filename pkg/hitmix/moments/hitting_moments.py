import logging
import time

import numpy as np
import scipy.sparse as sp
from scipy.special import comb

from hitmix.constants import MOMENT_ORDER, VARIANCE_CLAMP_TOL
from hitmix.errors import SeedSetError, SolverError
from hitmix.graph.core import build_nonseed_index, reachable_from
from hitmix.schemas.graph_data import Graph, NonSeedIndex, SeedSet
from hitmix.schemas.moments_data import MomentTable
from hitmix.schemas.solver_data import CgConfig
from hitmix.solver.cg import conjugate_gradient
from hitmix.solver.operator import RestrictedOperator

# Set up logging
logger = logging.getLogger(__name__)


def _recursion_rhs(m: int, lower_moments: list[np.ndarray], adjacency_block: sp.csr_matrix, degrees: np.ndarray) -> np.ndarray:
    rhs = np.ones(adjacency_block.shape[0])
    for s, moment in enumerate(lower_moments, start=1):
        rhs += comb(m, s, exact=True) * (adjacency_block @ moment) / degrees
    return rhs


def moment_rhs(m: int, lower_moments: list[np.ndarray], graph: Graph, index: NonSeedIndex) -> np.ndarray:
    """Right-hand side of the first-step equations for E T^m in original coordinates.

    (b_m)_i = 1 + sum_{s=1}^{m-1} C(m, s) sum_j P_ij (E T^s)_j over non-seed j.
    """
    if m < 1:
        raise ValueError(f"moment order must be at least 1, got {m}")
    if len(lower_moments) != m - 1:
        raise ValueError(f"order {m} needs {m - 1} lower moments, got {len(lower_moments)}")
    vertices = index.local_to_global
    for moment in lower_moments:
        if len(moment) != len(vertices):
            raise ValueError(f"lower moment of length {len(moment)} does not match {len(vertices)} vertices")
    adjacency_block = graph.adjacency[vertices][:, vertices].astype(np.float64).tocsr()
    degrees = graph.degrees[vertices].astype(np.float64)
    return _recursion_rhs(m, lower_moments, adjacency_block, degrees)


def compute_moments(graph: Graph, seeds: SeedSet, order: int = MOMENT_ORDER, cfg: CgConfig | None = None) -> MomentTable:
    """Raw hitting-time moments E T^1..E T^order for every non-seed vertex.

    Each order solves (I - Â) x = D^{1/2} b_m over the reachable non-seed
    vertices and recovers E T^m = D^{-1/2} x.
    """
    if order < 2:
        raise ValueError(f"order must be at least 2 to obtain variances, got {order}")
    cfg = cfg or CgConfig()
    start_time = time.perf_counter()

    index = build_nonseed_index(graph, seeds)
    report = reachable_from(graph, seeds)
    if report.unreachable_count == index.size:
        raise SeedSetError("no non-seed vertex can reach the seed set")

    active = index.restrict(report.reachable)
    op = RestrictedOperator(graph, active)
    sqrt_degrees = np.sqrt(op.degrees)
    logger.info(f"Solving for {order} moments over {active.size} reachable non-seed vertices")

    lower: list[np.ndarray] = []
    all_stats = []
    for m in range(1, order + 1):
        rhs = _recursion_rhs(m, lower, op.adjacency_block, op.degrees)
        x, stats = conjugate_gradient(op, sqrt_degrees * rhs, cfg)
        all_stats.append(stats)
        if not stats.converged:
            raise SolverError(
                f"conjugate gradient did not converge for moment {m} "
                f"after {stats.iterations} iterations (relative residual {stats.final_rel_residual:.3e})",
                stats,
            )
        lower.append(x / sqrt_degrees)

    raw = np.full((order, index.size), np.nan)
    raw[:, report.reachable] = np.vstack(lower)
    mean = raw[0]
    variance = raw[1] - mean ** 2

    clamp_floor = -VARIANCE_CLAMP_TOL * np.nan_to_num(mean, nan=0.0) ** 2
    suspicious = int(np.sum(variance < clamp_floor))
    if suspicious:
        logger.warning(f"{suspicious} variances fell below the clamp tolerance before clamping")
    variance = np.where(np.isnan(variance), np.nan, np.maximum(variance, 0.0))

    elapsed_ms = int((time.perf_counter() - start_time) * 1000)
    logger.info(f"Computed hitting-time moments in {elapsed_ms}ms")

    return MomentTable(
        vertices=index.local_to_global,
        mean=mean,
        variance=variance,
        reachable=report.reachable,
        raw_moments=raw,
        cg_stats=all_stats,
    )
