import logging
import math

import numpy as np

from hitmix.constants import SIGMA2_FLOOR
from hitmix.errors import MixtureError
from hitmix.schemas.mixture_data import LognormalParams, VertexSamples
from hitmix.schemas.moments_data import MomentTable

# Set up logging
logger = logging.getLogger(__name__)


def lognormal_mom(m1: float, m2: float, sigma2_floor: float = SIGMA2_FLOOR) -> LognormalParams:
    """Lognormal whose mean is m1 and variance is m2 (method of moments)."""
    if not m1 > 0.0:
        raise MixtureError(f"lognormal mean must be positive, got {m1}")
    if m2 < 0.0 or not math.isfinite(m2):
        raise MixtureError(f"lognormal variance must be finite and non-negative, got {m2}")
    sigma2 = max(math.log1p(m2 / (m1 * m1)), sigma2_floor)
    return LognormalParams(mu=math.log(m1) - sigma2 / 2, sigma2=sigma2)


def draw_pseudo_samples(
    moments: MomentTable,
    m: int,
    rng_seed: int,
    sigma2_floor: float = SIGMA2_FLOOR,
) -> VertexSamples:
    """Draw m lognormal variates per reachable vertex from its moment-matched fit.

    Each vertex draws from its own stream seeded by (rng_seed, vertex id), so the
    result does not depend on vertex order.
    """
    if m < 1:
        raise MixtureError(f"samples per vertex must be at least 1, got {m}")
    vertices, mean, variance = moments.reachable_part()
    if len(vertices) == 0:
        raise MixtureError("no reachable vertices to sample")

    samples = np.empty((len(vertices), m))
    for row, (vertex, m1, m2) in enumerate(zip(vertices, mean, variance)):
        params = lognormal_mom(float(m1), float(m2), sigma2_floor)
        rng = np.random.default_rng([int(rng_seed), int(vertex)])
        samples[row] = rng.lognormal(params.mu, math.sqrt(params.sigma2), size=m)

    logger.info(f"Drew {m} pseudo-samples for each of {len(vertices)} vertices")
    return VertexSamples(vertices=vertices, samples=samples, rng_seed=rng_seed)
