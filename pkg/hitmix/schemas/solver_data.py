from typing import Literal

from pydantic import BaseModel, field_validator

from hitmix.constants import CG_ITERS_PER_VERTEX, CG_MIN_MAX_ITERS, CG_REL_TOL


class CgConfig(BaseModel):
    model_config = {"extra": "forbid"}

    rel_tol: float = CG_REL_TOL
    max_iters: int | None = None
    start: Literal["zeros", "random"] = "zeros"
    seed: int | None = None

    @field_validator("rel_tol")
    def validate_rel_tol(cls, v):
        if not 0.0 < v < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {v}")
        return v

    @field_validator("max_iters")
    def validate_max_iters(cls, v):
        if v is not None and v < 1:
            raise ValueError(f"max_iters must be at least 1, got {v}")
        return v

    def resolve_max_iters(self, n: int) -> int:
        if self.max_iters is not None:
            return self.max_iters
        return max(CG_ITERS_PER_VERTEX * n, CG_MIN_MAX_ITERS)


class CgStats(BaseModel):
    iterations: int
    initial_rel_residual: float
    final_rel_residual: float
    converged: bool
