import logging
import math

import numpy as np

from hitmix.constants import CG_RESIDUAL_REFRESH
from hitmix.errors import DimensionError, SolverError
from hitmix.schemas.solver_data import CgConfig, CgStats
from hitmix.solver.operator import RestrictedOperator

# Set up logging
logger = logging.getLogger(__name__)

NON_SPD_MESSAGE = (
    "conjugate gradient broke down; the operator is not positive definite. "
    "Exclude vertices that cannot reach the seed set before solving"
)


def conjugate_gradient(op: RestrictedOperator, b: np.ndarray, cfg: CgConfig | None = None) -> tuple[np.ndarray, CgStats]:
    """Solve H x = b for symmetric positive definite H given only H's action.

    Stops once ||b - Hx|| / ||b|| <= cfg.rel_tol. The recursive residual is
    replaced by the true one every CG_RESIDUAL_REFRESH iterations and again
    whenever it signals convergence.
    """
    cfg = cfg or CgConfig()
    b = np.asarray(b, dtype=np.float64)
    n = op.shape[0]
    if b.shape != (n,):
        raise DimensionError(f"right-hand side of shape {b.shape} does not match operator of size {n}")
    if not np.all(np.isfinite(b)):
        raise SolverError("right-hand side contains NaN or Inf")

    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return np.zeros(n), CgStats(iterations=0, initial_rel_residual=0.0, final_rel_residual=0.0, converged=True)

    if cfg.start == "random":
        x0 = np.random.default_rng(cfg.seed).standard_normal(n)
    else:
        x0 = np.zeros(n)
    max_iters = cfg.resolve_max_iters(n)
    tol = cfg.rel_tol * b_norm

    x = x0.copy()
    r = b - op.apply(x)
    rr = float(r @ r)
    initial_rel = math.sqrt(rr) / b_norm
    p = r.copy()

    iterations = 0
    while iterations < max_iters:
        if math.sqrt(rr) <= tol:
            r = b - op.apply(x)
            rr = float(r @ r)
            if math.sqrt(rr) <= tol:
                break
            p = r.copy()

        q = op.apply(p)
        pq = float(p @ q)
        if not math.isfinite(pq) or pq <= 0.0:
            stats = _stats(op, b, x, b_norm, iterations, initial_rel, cfg)
            raise SolverError(NON_SPD_MESSAGE, stats)

        alpha = rr / pq
        x += alpha * p
        iterations += 1
        if iterations % CG_RESIDUAL_REFRESH == 0:
            r = b - op.apply(x)
        else:
            r -= alpha * q
        rr_new = float(r @ r)
        if not math.isfinite(rr_new):
            stats = _stats(op, b, x, b_norm, iterations, initial_rel, cfg)
            raise SolverError(NON_SPD_MESSAGE, stats)

        p = r + (rr_new / rr) * p
        rr = rr_new

    stats = _stats(op, b, x, b_norm, iterations, initial_rel, cfg)
    if stats.final_rel_residual > initial_rel:
        x = x0
        stats = stats.model_copy(update={"final_rel_residual": initial_rel, "converged": initial_rel <= cfg.rel_tol})

    logger.info(
        f"CG finished after {stats.iterations} iterations "
        f"(relative residual {stats.final_rel_residual:.3e}, converged={stats.converged})"
    )
    return x, stats


def _stats(op, b, x, b_norm, iterations, initial_rel, cfg) -> CgStats:
    final_rel = float(np.linalg.norm(b - op.apply(x))) / b_norm
    return CgStats(
        iterations=iterations,
        initial_rel_residual=initial_rel,
        final_rel_residual=final_rel,
        converged=final_rel <= cfg.rel_tol,
    )
