from typing import Literal

from pydantic import BaseModel, Field, field_validator, model_validator

from hitmix.constants import SBM_G_CANDIDATES
from hitmix.schemas.mixture_data import HitmixConfig


class SbmConfig(BaseModel):
    model_config = {"extra": "forbid"}

    n_blocks: int
    block_size: int
    p_in: float
    p_out: float

    @field_validator("n_blocks", "block_size")
    def validate_count(cls, v):
        if v < 1:
            raise ValueError(f"must be at least 1, got {v}")
        return v

    @field_validator("p_in", "p_out")
    def validate_probability(cls, v):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {v}")
        return v

    @property
    def n_vertices(self) -> int:
        return self.n_blocks * self.block_size


def _default_sbm_hitmix() -> HitmixConfig:
    return HitmixConfig(g_candidates=SBM_G_CANDIDATES)


class SimulationSpec(BaseModel):
    """One Monte Carlo experiment: a single swept parameter over fixed SBM settings.

    For an n_blocks sweep, p_out is the out-block budget and each condition
    uses p_out / (b - 1), keeping the expected out-block degree constant.
    """

    model_config = {"extra": "forbid"}

    sweep: Literal["n_blocks", "p_in", "hitting_set_size"]
    values: list[float]
    n_blocks: int = 2
    block_size: int = 100
    p_in: float = 0.15
    p_out: float = 0.05
    hitting_set_size: int = 10
    mc_samples: int = 50
    seed: int = 0
    workers: int = 1
    hitmix: HitmixConfig = Field(default_factory=_default_sbm_hitmix)

    @field_validator("values")
    def validate_values(cls, v):
        if not v:
            raise ValueError("sweep values are empty")
        return v

    @field_validator("seed")
    def validate_seed(cls, v):
        if v < 0:
            raise ValueError(f"seed must be non-negative, got {v}")
        return v

    @field_validator("n_blocks", "block_size", "hitting_set_size", "mc_samples", "workers")
    def validate_count(cls, v):
        if v < 1:
            raise ValueError(f"must be at least 1, got {v}")
        return v

    @model_validator(mode="after")
    def validate_sweep_values(self):
        if self.sweep in ("n_blocks", "hitting_set_size"):
            if any(float(x) != int(x) or x < 1 for x in self.values):
                raise ValueError(f"{self.sweep} values must be positive integers, got {self.values}")
        else:
            if any(not 0.0 <= x <= 1.0 for x in self.values):
                raise ValueError(f"p_in values must lie in [0, 1], got {self.values}")
        return self

    def condition(self, value: float) -> tuple[SbmConfig, int]:
        """SBM settings and hitting-set size for one sweep value."""
        n_blocks, p_in, p_out, size = self.n_blocks, self.p_in, self.p_out, self.hitting_set_size
        if self.sweep == "n_blocks":
            n_blocks = int(value)
            p_out = self.p_out / (n_blocks - 1) if n_blocks > 1 else 0.0
        elif self.sweep == "p_in":
            p_in = float(value)
        else:
            size = int(value)
        config = SbmConfig(n_blocks=n_blocks, block_size=self.block_size, p_in=p_in, p_out=p_out)
        return config, size


class RunRecord(BaseModel):
    condition: float
    run: int
    ari: float
    f1: float
    failed: bool = False
    unreachable: int = 0
    em_monotone: bool = True
    rows_normalized: bool = True
    error: str | None = None


class ConditionSummary(BaseModel):
    condition: float
    ari_mean: float
    ari_p5: float
    ari_p95: float
    f1_mean: float
    f1_p5: float
    f1_p95: float
    failures: int
    unreachable_runs: int
    n_runs: int


class McSummary(BaseModel):
    sweep: str
    conditions: list[ConditionSummary]
    runs: list[RunRecord]
