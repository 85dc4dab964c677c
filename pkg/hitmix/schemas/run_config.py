from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, field_validator, model_validator


class RunConfig(BaseModel):
    model_config = {"extra": "forbid"}

    subcommand: Literal["moments", "expand", "sbm-sim", "eval", "relabel"]
    graph: Path | None = None
    seeds: Path | None = None
    config: Path | None = None
    out: Path = Path(".")
    seed: int | None = None
    workers: int = 1
    overrides: dict[str, Any] = {}

    @field_validator("workers")
    def validate_workers(cls, v):
        if v < 1:
            raise ValueError(f"workers must be at least 1, got {v}")
        return v

    @model_validator(mode="after")
    def validate_paths(self):
        required = {
            "moments": ("graph", "seeds"),
            "expand": ("graph", "seeds"),
            "sbm-sim": ("config",),
            "relabel": ("graph",),
            "eval": (),
        }[self.subcommand]
        for name in required:
            path = getattr(self, name)
            if path is None:
                raise ValueError(f"{self.subcommand} requires --{name}")
            if not path.exists():
                raise ValueError(f"--{name} file not found: {path}")
        return self
