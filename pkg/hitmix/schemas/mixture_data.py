import math
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, field_validator

from hitmix.constants import (
    EM_MAX_ITERS,
    EM_REL_TOL,
    G_CANDIDATES,
    SAMPLES_PER_VERTEX,
    SIGMA2_FLOOR,
    TAU,
)


class LognormalParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    mu: float
    sigma2: float

    @field_validator("sigma2")
    def validate_sigma2(cls, v):
        if not v > 0.0:
            raise ValueError(f"sigma2 must be positive, got {v}")
        return v

    @property
    def mean(self) -> float:
        return math.exp(self.mu + self.sigma2 / 2)

    @property
    def variance(self) -> float:
        return math.expm1(self.sigma2) * math.exp(2 * self.mu + self.sigma2)

    def logpdf(self, t: np.ndarray) -> np.ndarray:
        log_t = np.log(t)
        return -log_t - 0.5 * np.log(2 * np.pi * self.sigma2) - (log_t - self.mu) ** 2 / (2 * self.sigma2)


class VertexSamples(BaseModel):
    """m pseudo-samples per reachable non-seed vertex, one row per vertex."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vertices: np.ndarray
    samples: np.ndarray
    rng_seed: int

    @property
    def m(self) -> int:
        return self.samples.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.samples.shape[0]


class HitmixConfig(BaseModel):
    model_config = {"extra": "forbid"}

    m: int = SAMPLES_PER_VERTEX
    g_candidates: list[int] = G_CANDIDATES
    tau: float = TAU
    em_max_iters: int = EM_MAX_ITERS
    em_rel_tol: float = EM_REL_TOL
    rng_seed: int = 0
    sigma2_floor: float = SIGMA2_FLOOR
    bic_n: Literal["observations", "vertices"] = "observations"
    e_step: Literal["grouped", "per_sample"] = "grouped"
    fit_workers: int = 1

    @field_validator("m")
    def validate_m(cls, v):
        if v < 1:
            raise ValueError(f"m must be at least 1, got {v}")
        return v

    @field_validator("g_candidates")
    def validate_g_candidates(cls, v):
        if not v:
            raise ValueError("g_candidates is empty")
        if any(g < 2 for g in v):
            raise ValueError(f"every candidate g must be at least 2, got {v}")
        return sorted(set(v))

    @field_validator("tau")
    def validate_tau(cls, v):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"tau must lie in [0, 1], got {v}")
        return v

    @field_validator("rng_seed")
    def validate_rng_seed(cls, v):
        if v < 0:
            raise ValueError(f"rng_seed must be non-negative, got {v}")
        return v

    @field_validator("em_max_iters", "fit_workers")
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError(f"must be at least 1, got {v}")
        return v

    @field_validator("em_rel_tol", "sigma2_floor")
    def validate_small_positive(cls, v):
        if not v > 0.0:
            raise ValueError(f"must be positive, got {v}")
        return v


class MixtureFit(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    g: int
    vertices: np.ndarray
    components: list[LognormalParams]
    weights: np.ndarray
    responsibilities: np.ndarray
    log_likelihood: float
    log_likelihood_trace: list[float]
    iterations: int
    converged: bool
    restarts: int = 0

    def goal_component(self) -> int:
        """Component with the smallest fitted lognormal mean."""
        return int(np.argmin([c.mean for c in self.components]))


class MembershipResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vertices: np.ndarray
    posterior: np.ndarray
    labels: np.ndarray
    goal_component: int
    selected_g: int
    bic_by_g: dict[int, float]
    tau: float
    fit: MixtureFit | None
    unreachable: np.ndarray
    mean: np.ndarray
    variance: np.ndarray

    @property
    def goal_set(self) -> np.ndarray:
        return self.vertices[self.labels]

    def ranked(self) -> np.ndarray:
        """Vertices ordered by decreasing goal posterior, ties by vertex id."""
        order = np.lexsort((self.vertices, -self.posterior))
        return self.vertices[order]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "vertex_id": self.vertices,
            "mean": self.mean,
            "variance": self.variance,
            "posterior_goal": self.posterior,
            "label": self.labels.astype(int),
        })

    def summary(self) -> dict:
        summary = {
            "selected_g": self.selected_g,
            "goal_component": self.goal_component,
            "tau": self.tau,
            "bic": {str(g): value for g, value in self.bic_by_g.items()},
            "goal_set_size": int(self.labels.sum()),
            "unreachable": [int(v) for v in self.unreachable],
        }
        if self.fit is not None:
            summary["em_iterations"] = self.fit.iterations
            summary["em_converged"] = self.fit.converged
            summary["log_likelihood"] = self.fit.log_likelihood
            summary["components"] = [
                {"mu": c.mu, "sigma2": c.sigma2, "weight": float(w), "mean": c.mean}
                for c, w in zip(self.fit.components, self.fit.weights)
            ]
        return summary
