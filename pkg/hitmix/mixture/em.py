import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import logsumexp

from hitmix.constants import MAX_COMPONENT_RESTARTS, MIN_COMPONENT_WEIGHT
from hitmix.errors import MixtureError
from hitmix.schemas.mixture_data import HitmixConfig, LognormalParams, MixtureFit, VertexSamples

# Set up logging
logger = logging.getLogger(__name__)


class LogSampleStats(BaseModel):
    """Per-vertex sufficient statistics of the log pseudo-samples."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    m: int
    mean: np.ndarray
    within: np.ndarray
    log_sum: np.ndarray

    @classmethod
    def from_samples(cls, samples: VertexSamples) -> "LogSampleStats":
        log_t = np.log(samples.samples)
        mean = log_t.mean(axis=1)
        within = ((log_t - mean[:, None]) ** 2).sum(axis=1)
        return cls(m=log_t.shape[1], mean=mean, within=within, log_sum=log_t.sum(axis=1))

    @property
    def n(self) -> int:
        return len(self.mean)

    def pooled_mle(self, rows: np.ndarray | slice = slice(None), floor: float = 0.0) -> tuple[float, float]:
        mean, within = self.mean[rows], self.within[rows]
        mu = float(mean.mean())
        sigma2 = float((within.sum() + self.m * ((mean - mu) ** 2).sum()) / (len(mean) * self.m))
        return mu, max(sigma2, floor)


def _component_loglik(stats: LogSampleStats, mu: np.ndarray, sigma2: np.ndarray) -> np.ndarray:
    """log prod_j f(t_ij; theta_k) for every vertex i and component k."""
    squares = stats.within[:, None] + stats.m * (stats.mean[:, None] - mu[None, :]) ** 2
    return (
        -stats.log_sum[:, None]
        - 0.5 * stats.m * np.log(2 * np.pi * sigma2)[None, :]
        - squares / (2 * sigma2[None, :])
    )


def _e_step(stats, mu, sigma2, weights, e_step) -> tuple[np.ndarray, float]:
    component = _component_loglik(stats, mu, sigma2)
    with np.errstate(divide="ignore"):
        log_weights = np.log(weights)
    joint = component + log_weights[None, :]
    per_vertex = logsumexp(joint, axis=1)
    if e_step == "per_sample":
        joint = component + stats.m * log_weights[None, :]
        responsibilities = np.exp(joint - logsumexp(joint, axis=1)[:, None])
    else:
        responsibilities = np.exp(joint - per_vertex[:, None])
    return responsibilities, float(per_vertex.sum())


def _m_step(stats, responsibilities, floor) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    totals = responsibilities.sum(axis=0)
    weights = totals / stats.n
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = (responsibilities * stats.mean[:, None]).sum(axis=0) / totals
        squares = stats.within[:, None] + stats.m * (stats.mean[:, None] - mu[None, :]) ** 2
        sigma2 = (responsibilities * squares).sum(axis=0) / (stats.m * totals)
    return mu, np.maximum(sigma2, floor), weights


def _as_arrays(components: list[LognormalParams]) -> tuple[np.ndarray, np.ndarray]:
    return np.array([c.mu for c in components]), np.array([c.sigma2 for c in components])


def _as_components(mu: np.ndarray, sigma2: np.ndarray) -> list[LognormalParams]:
    return [LognormalParams(mu=float(a), sigma2=float(b)) for a, b in zip(mu, sigma2)]


def mixture_log_likelihood(samples: VertexSamples, components: list[LognormalParams], weights: np.ndarray) -> float:
    """sum_i log sum_k pi_k prod_j f(t_ij; theta_k)"""
    stats = LogSampleStats.from_samples(samples)
    mu, sigma2 = _as_arrays(components)
    _, log_likelihood = _e_step(stats, mu, sigma2, np.asarray(weights, dtype=np.float64), "grouped")
    return log_likelihood


def em_step(
    samples: VertexSamples,
    components: list[LognormalParams],
    weights: np.ndarray,
    cfg: HitmixConfig | None = None,
) -> tuple[list[LognormalParams], np.ndarray, np.ndarray, float]:
    """One EM iteration: returns updated components, weights, their responsibilities and log-likelihood."""
    cfg = cfg or HitmixConfig()
    stats = LogSampleStats.from_samples(samples)
    mu, sigma2 = _as_arrays(components)
    responsibilities, _ = _e_step(stats, mu, sigma2, np.asarray(weights, dtype=np.float64), cfg.e_step)
    mu, sigma2, new_weights = _m_step(stats, responsibilities, cfg.sigma2_floor)
    responsibilities, log_likelihood = _e_step(stats, mu, sigma2, new_weights, cfg.e_step)
    return _as_components(mu, sigma2), new_weights, responsibilities, log_likelihood


def _quantile_init(stats: LogSampleStats, g: int, floor: float) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(stats.mean, kind="stable")
    params = [stats.pooled_mle(rows, floor) for rows in np.array_split(order, g)]
    return np.array([p[0] for p in params]), np.array([p[1] for p in params])


def em_fit(samples: VertexSamples, g: int, cfg: HitmixConfig | None = None) -> MixtureFit:
    """Fit a g-component lognormal mixture to grouped pseudo-samples.

    Starts from a split of the vertices into g quantile groups of their mean log
    sample. A component whose weight drops below MIN_COMPONENT_WEIGHT restarts
    at the pooled estimate; more than MAX_COMPONENT_RESTARTS restarts is an error.
    """
    cfg = cfg or HitmixConfig()
    if g < 2:
        raise MixtureError(f"mixture needs at least 2 components, got {g}")
    if g > samples.n_vertices:
        raise MixtureError(f"{g} components requested for {samples.n_vertices} vertices")

    stats = LogSampleStats.from_samples(samples)
    distinct = len(np.unique(stats.mean))
    if distinct < g:
        logger.warning(f"Only {distinct} distinct vertex log-means for {g} components")

    mu, sigma2 = _quantile_init(stats, g, cfg.sigma2_floor)
    weights = np.full(g, 1.0 / g)
    responsibilities, log_likelihood = _e_step(stats, mu, sigma2, weights, cfg.e_step)
    trace = [log_likelihood]
    restarts = 0
    converged = False

    iterations = 0
    while iterations < cfg.em_max_iters:
        iterations += 1
        mu, sigma2, weights = _m_step(stats, responsibilities, cfg.sigma2_floor)

        collapsed = np.flatnonzero(~(weights >= MIN_COMPONENT_WEIGHT))
        if collapsed.size:
            restarts += 1
            if restarts > MAX_COMPONENT_RESTARTS:
                raise MixtureError(f"component weights collapsed {restarts} times for g={g}")
            logger.warning(f"Restarting collapsed components {collapsed.tolist()} for g={g} (restart {restarts})")
            mu[collapsed], sigma2[collapsed] = stats.pooled_mle(floor=cfg.sigma2_floor)
            weights[collapsed] = 1.0 / g
            weights = weights / weights.sum()
            trace = []

        responsibilities, new_log_likelihood = _e_step(stats, mu, sigma2, weights, cfg.e_step)
        trace.append(new_log_likelihood)
        change = abs(new_log_likelihood - log_likelihood)
        log_likelihood = new_log_likelihood
        if not collapsed.size and change <= cfg.em_rel_tol * max(abs(log_likelihood), 1e-300):
            converged = True
            break

    logger.info(
        f"EM for g={g} finished after {iterations} iterations "
        f"(log-likelihood {log_likelihood:.6f}, converged={converged})"
    )
    return MixtureFit(
        g=g,
        vertices=samples.vertices,
        components=_as_components(mu, sigma2),
        weights=weights,
        responsibilities=responsibilities,
        log_likelihood=log_likelihood,
        log_likelihood_trace=trace,
        iterations=iterations,
        converged=converged,
        restarts=restarts,
    )


def single_component_fit(samples: VertexSamples, cfg: HitmixConfig | None = None) -> MixtureFit:
    cfg = cfg or HitmixConfig()
    stats = LogSampleStats.from_samples(samples)
    mu, sigma2 = stats.pooled_mle(floor=cfg.sigma2_floor)
    component = _component_loglik(stats, np.array([mu]), np.array([sigma2]))
    log_likelihood = float(component.sum())
    return MixtureFit(
        g=1,
        vertices=samples.vertices,
        components=[LognormalParams(mu=mu, sigma2=sigma2)],
        weights=np.ones(1),
        responsibilities=np.ones((stats.n, 1)),
        log_likelihood=log_likelihood,
        log_likelihood_trace=[log_likelihood],
        iterations=0,
        converged=True,
    )


def bic(fit: MixtureFit, n_vertices: int, m: int, bic_n: str = "observations") -> float:
    """Schwarz criterion with 3g - 1 free parameters; lower is better."""
    n_params = 3 * fit.g - 1
    n_obs = n_vertices * m if bic_n == "observations" else n_vertices
    return n_params * math.log(n_obs) - 2 * fit.log_likelihood


def fit_candidates(
    samples: VertexSamples,
    g_candidates: list[int],
    cfg: HitmixConfig | None = None,
) -> tuple[dict[int, MixtureFit], dict[int, float]]:
    """Fit every candidate g; a g that cannot be fitted gets BIC = +inf."""
    cfg = cfg or HitmixConfig()

    def fit_one(g: int) -> MixtureFit | None:
        if g > samples.n_vertices:
            logger.warning(f"Skipping g={g}: only {samples.n_vertices} vertices")
            return None
        try:
            return em_fit(samples, g, cfg)
        except MixtureError as e:
            logger.warning(f"Skipping g={g}: {e}")
            return None

    if cfg.fit_workers > 1 and len(g_candidates) > 1:
        with ThreadPoolExecutor(max_workers=cfg.fit_workers) as pool:
            results = list(pool.map(fit_one, g_candidates))
    else:
        results = [fit_one(g) for g in g_candidates]

    fits = {}
    bics = {}
    for g, fit in zip(g_candidates, results):
        if fit is None:
            bics[g] = math.inf
            continue
        fits[g] = fit
        bics[g] = bic(fit, samples.n_vertices, samples.m, cfg.bic_n)
        logger.info(f"BIC for g={g}: {bics[g]:.4f}")
    return fits, bics
