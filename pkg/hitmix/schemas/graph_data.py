import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, field_validator, model_validator


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


class Graph(BaseModel):
    """Undirected multigraph in CSR form.

    A self-loop of multiplicity c is stored as 2c on the diagonal, so each
    adjacency row sums to the vertex degree.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_vertices: int
    adjacency: sp.csr_matrix
    degrees: np.ndarray

    @field_validator("n_vertices")
    def validate_n_vertices(cls, v):
        if v < 1:
            raise ValueError(f"Graph needs at least one vertex, got {v}")
        return v

    @model_validator(mode="after")
    def validate_structure(self):
        if self.adjacency.shape != (self.n_vertices, self.n_vertices):
            raise ValueError(
                f"Adjacency shape {self.adjacency.shape} does not match {self.n_vertices} vertices"
            )
        if (self.adjacency != self.adjacency.T).nnz:
            raise ValueError("Adjacency is not symmetric")
        if self.degrees.shape != (self.n_vertices,):
            raise ValueError(f"Degree vector has shape {self.degrees.shape}")
        _readonly(self.degrees)
        return self

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.sum()) // 2

    def neighbors(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        """Sorted neighbor ids of v and the edge multiplicity to each."""
        start, stop = self.adjacency.indptr[v], self.adjacency.indptr[v + 1]
        ids = self.adjacency.indices[start:stop]
        mult = self.adjacency.data[start:stop].copy()
        mult[ids == v] //= 2
        return ids, mult

    def edge_multiplicity(self, u: int, v: int) -> int:
        value = int(self.adjacency[u, v])
        return value // 2 if u == v else value


class SeedSet(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_vertices: int
    members: frozenset[int]
    complement: np.ndarray

    @field_validator("members")
    def validate_members(cls, v):
        if not v:
            raise ValueError("Seed set is empty")
        return v

    @model_validator(mode="after")
    def validate_partition(self):
        if len(self.complement) == 0:
            raise ValueError("Seed set covers every vertex; nothing left to expand into")
        if len(self.members) + len(self.complement) != self.n_vertices:
            raise ValueError("Seed set and complement do not partition the vertex set")
        _readonly(self.complement)
        return self

    def member_array(self) -> np.ndarray:
        return np.array(sorted(self.members), dtype=np.int64)


class NonSeedIndex(BaseModel):
    """Index maps between global vertex ids and local coordinates over the non-seed vertices."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    global_to_local: np.ndarray
    local_to_global: np.ndarray

    @model_validator(mode="after")
    def validate_bijection(self):
        mapped = self.global_to_local[self.local_to_global]
        if not np.array_equal(mapped, np.arange(len(self.local_to_global))):
            raise ValueError("Index maps are not inverse to each other")
        _readonly(self.global_to_local)
        _readonly(self.local_to_global)
        return self

    @property
    def size(self) -> int:
        return len(self.local_to_global)

    def restrict(self, mask: np.ndarray) -> "NonSeedIndex":
        """Sub-index over the local entries where mask is true, order preserved."""
        kept = self.local_to_global[np.asarray(mask, dtype=bool)]
        global_to_local = np.full(len(self.global_to_local), -1, dtype=np.int64)
        global_to_local[kept] = np.arange(len(kept))
        return NonSeedIndex(global_to_local=global_to_local, local_to_global=kept.copy())


class ReachabilityReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vertices: np.ndarray
    reachable: np.ndarray
    unreachable_count: int

    @property
    def unreachable_vertices(self) -> np.ndarray:
        return self.vertices[~self.reachable]
