import logging

import numpy as np
import scipy.sparse as sp

from hitmix.errors import DimensionError
from hitmix.schemas.graph_data import Graph, NonSeedIndex

# Set up logging
logger = logging.getLogger(__name__)


class RestrictedOperator:
    """Applies H = I - D^{-1/2} A D^{-1/2} restricted to the vertices of an index.

    Only the adjacency block among the indexed vertices is kept; H itself is
    never formed.
    """

    def __init__(self, graph: Graph, index: NonSeedIndex):
        vertices = index.local_to_global
        degrees = graph.degrees[vertices].astype(np.float64)
        if np.any(degrees <= 0):
            raise DimensionError("restricted operator needs every indexed vertex to have positive degree")

        self.graph = graph
        self.index = index
        self.adjacency_block = graph.adjacency[vertices][:, vertices].astype(np.float64).tocsr()
        self.degrees = degrees
        self.inv_sqrt_degrees = 1.0 / np.sqrt(degrees)
        scale = sp.diags(self.inv_sqrt_degrees)
        self._normalized_block = (scale @ self.adjacency_block @ scale).tocsr()
        self.shape = (len(vertices), len(vertices))

        logger.debug(f"Restricted operator over {self.shape[0]} vertices, {self.adjacency_block.nnz} stored entries")

    def apply(self, x: np.ndarray) -> np.ndarray:
        return apply_restricted_operator(self, x)


def apply_restricted_operator(op: RestrictedOperator, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (op.shape[0],):
        raise DimensionError(f"vector of shape {x.shape} does not match operator of size {op.shape[0]}")
    return x - op._normalized_block @ x
