import logging
import time

import numpy as np

from hitmix.constants import MOMENT_TIE_RTOL
from hitmix.mixture.em import fit_candidates, single_component_fit
from hitmix.mixture.lognormal import draw_pseudo_samples
from hitmix.moments.hitting_moments import compute_moments
from hitmix.schemas.graph_data import Graph, SeedSet
from hitmix.schemas.mixture_data import HitmixConfig, MembershipResult
from hitmix.schemas.solver_data import CgConfig

# Set up logging
logger = logging.getLogger(__name__)


def _elapsed_ms(start: float) -> int:
    return int((time.perf_counter() - start) * 1000)


def moments_are_tied(mean: np.ndarray, variance: np.ndarray, rtol: float = MOMENT_TIE_RTOL) -> bool:
    """True when every vertex has the same mean and variance up to rtol."""
    scale = float(np.max(np.abs(mean)))
    return bool(np.ptp(mean) <= rtol * scale and np.ptp(variance) <= rtol * scale * scale)


def hitmix(graph: Graph, seeds: SeedSet, cfg: HitmixConfig | None = None, cg_cfg: CgConfig | None = None) -> MembershipResult:
    """Goal-set membership for every non-seed vertex.

    Moments by conjugate gradient, moment-matched lognormal pseudo-samples, a
    lognormal mixture per candidate g, the minimum-BIC fit, and the posterior
    of its smallest-mean component thresholded at tau.
    """
    cfg = cfg or HitmixConfig()
    logger.info(f"Starting HITMIX with {len(seeds.members)} seeds on {graph.n_vertices} vertices")

    start = time.perf_counter()
    moments = compute_moments(graph, seeds, order=2, cfg=cg_cfg)
    logger.info(f"Moments stage took {_elapsed_ms(start)}ms")

    start = time.perf_counter()
    samples = draw_pseudo_samples(moments, cfg.m, cfg.rng_seed, cfg.sigma2_floor)
    logger.info(f"Sampling stage took {_elapsed_ms(start)}ms")

    start = time.perf_counter()
    _, mean, variance = moments.reachable_part()
    if moments_are_tied(mean, variance):
        logger.warning(f"All {len(mean)} reachable vertices share the same moments; fitting a single component")
        fits, bics = {}, {}
    else:
        fits, bics = fit_candidates(samples, cfg.g_candidates, cfg)
    if fits:
        selected_g = min(fits, key=lambda g: (bics[g], g))
        fit = fits[selected_g]
    else:
        if bics:
            logger.warning("Every candidate mixture collapsed; assigning all reachable vertices to one component")
        fit = single_component_fit(samples, cfg)
        selected_g = 1
    logger.info(f"Mixture stage took {_elapsed_ms(start)}ms, selected g={selected_g}")

    goal = fit.goal_component()
    posterior = np.zeros(len(moments.vertices))
    posterior[moments.reachable] = fit.responsibilities[:, goal]
    labels = posterior > cfg.tau
    logger.info(f"Goal set holds {int(labels.sum())} of {len(labels)} non-seed vertices at tau={cfg.tau}")

    return MembershipResult(
        vertices=moments.vertices,
        posterior=posterior,
        labels=labels,
        goal_component=goal,
        selected_g=selected_g,
        bic_by_g=bics,
        tau=cfg.tau,
        fit=fit,
        unreachable=moments.vertices[~moments.reachable],
        mean=moments.mean,
        variance=moments.variance,
    )
