import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from hitmix.schemas.solver_data import CgStats


class MomentTable(BaseModel):
    """Hitting-time moments for the non-seed vertices, in ascending vertex order.

    Unreachable vertices carry NaN moments.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vertices: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    reachable: np.ndarray
    raw_moments: np.ndarray
    cg_stats: list[CgStats]

    def reachable_part(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        mask = self.reachable
        return self.vertices[mask], self.mean[mask], self.variance[mask]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "vertex_id": self.vertices,
            "mean": self.mean,
            "variance": self.variance,
            "reachable": self.reachable.astype(int),
        })
