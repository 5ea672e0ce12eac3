# mclaw/models/grid.py
"""
Grid models - the periodic cell complex and its time-dependent measures.

Cells are indexed in C order over the per-axis indices (i_1, ..., i_d).
Faces are grouped by axis: face a*N + K is the face between cell K and
its +1 neighbour along axis a, oriented left (K) -> right.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class CellComplex:
    """Uniform periodic partition of [0,1)^d into n^d cells."""

    dim: int
    n: int
    quadrature_order: int
    cell_centers: np.ndarray  # (N, d)
    face_axis: np.ndarray  # (F,)
    face_left: np.ndarray  # (F,)
    face_right: np.ndarray  # (F,)
    face_midpoints: np.ndarray  # (F, d)
    # lower_faces[a, K] = face on the lower side of cell K along axis a
    lower_faces: np.ndarray  # (d, N)
    # side_neighbors[a, s, K], s = 0 lower / 1 upper neighbour along axis a
    side_neighbors: np.ndarray  # (d, 2, N)

    @property
    def n_cells(self) -> int:
        return self.n**self.dim

    @property
    def n_faces(self) -> int:
        return self.dim * self.n_cells

    @property
    def h(self) -> float:
        return 1.0 / self.n

    def upper_faces(self, axis: int) -> np.ndarray:
        start = axis * self.n_cells
        return np.arange(start, start + self.n_cells)

    def __repr__(self) -> str:
        return f"<CellComplex(dim={self.dim}, n={self.n}, q={self.quadrature_order})>"


@dataclass(frozen=True, eq=False)
class GeometrySnapshot:
    """Cell volumes and face geometry of a CellComplex at time t."""

    t: float
    cell_volumes: np.ndarray  # (N,)  integral of dV over each cell
    face_measures: np.ndarray  # (F,)  induced (d-1)-measure; 1 for points
    face_normals: np.ndarray  # (F, d) g-unit conormal covector at midpoint
    # Area form sqrt(det g) integrated over the face, rescaled to the unit
    # conormal at the midpoint; multiplies <f, n>_g in the scheme.
    face_flux_measures: np.ndarray  # (F,)
    # sqrt(det g) g^{a j} h^(d-1) at the face midpoint, j = 0..d-1
    face_diffusion: np.ndarray  # (F, d)

    @property
    def total_volume(self) -> float:
        return math.fsum(self.cell_volumes)
