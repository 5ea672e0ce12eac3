# mclaw/services/grid.py
"""
Periodic cell complex, Gauss-Legendre metric quadrature and the
face operators shared by the solver and the Laplace-Beltrami operator.
"""

import logging

import numpy as np

from mclaw.errors import ConfigurationError, UsageError
from mclaw.models.geometry import MetricField
from mclaw.models.grid import CellComplex, GeometrySnapshot
from mclaw.services.geometry import check_positive_definite, metric_tensor, volume_factor

logger = logging.getLogger(__name__)


# ============================================
# 1. Construction
# ============================================
def build(dim: int, n: int, quadrature_order: int = 4) -> CellComplex:
    """
    Uniform periodic partition of [0,1)^dim into n^dim cells.

    Raises:
        ConfigurationError: dim not in {1, 2}, n < 4 or quadrature_order < 1
    """
    issues = []
    if dim not in (1, 2):
        issues.append(f"dim must be 1 or 2, got {dim}")
    if n < 4:
        issues.append(f"n must be >= 4, got {n}")
    if quadrature_order < 1:
        issues.append(f"quadrature_order must be >= 1, got {quadrature_order}")
    if issues:
        raise ConfigurationError("; ".join(issues))

    shape = (n,) * dim
    index = np.indices(shape).reshape(dim, -1).T  # (N, d), C order
    N = index.shape[0]
    centers = (index + 0.5) / n

    side = np.empty((dim, 2, N), dtype=np.int64)
    for a in range(dim):
        for s, shift in enumerate((-1, 1)):
            moved = index.copy()
            moved[:, a] = (moved[:, a] + shift) % n
            side[a, s] = np.ravel_multi_index(moved.T, shape)

    cells = np.arange(N)
    face_axis = np.repeat(np.arange(dim), N)
    face_left = np.tile(cells, dim)
    face_right = side[:, 1, :].reshape(-1)
    face_midpoints = np.tile(centers, (dim, 1))
    face_midpoints[np.arange(dim * N), face_axis] += 0.5 / n
    face_midpoints %= 1.0
    lower_faces = np.arange(dim)[:, None] * N + side[:, 0, :]

    logger.debug("built grid dim=%s n=%s cells=%s faces=%s", dim, n, N, dim * N)
    return CellComplex(
        dim=dim,
        n=n,
        quadrature_order=quadrature_order,
        cell_centers=centers,
        face_axis=face_axis,
        face_left=face_left,
        face_right=face_right,
        face_midpoints=face_midpoints,
        lower_faces=lower_faces,
        side_neighbors=side,
    )


def _gauss_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def cell_quadrature(c: CellComplex) -> tuple[np.ndarray, np.ndarray]:
    """
    Tensor-product quadrature over every cell.

    Returns:
        points (N, Q, d) and weights (Q,) with sum(weights) = h^d
    """
    x, w = _gauss_nodes(c.quadrature_order)
    grids = np.meshgrid(*([x] * c.dim), indexing="ij")
    offsets = (np.stack([g.ravel() for g in grids], axis=-1) - 0.5) * c.h
    weights = np.prod(np.meshgrid(*([w] * c.dim), indexing="ij"), axis=0).ravel()
    return c.cell_centers[:, None, :] + offsets[None], weights * c.h**c.dim


def _face_quadrature(c: CellComplex) -> tuple[np.ndarray, np.ndarray]:
    """Points (F, Q, d) along each face and weights (Q,) summing to h^(d-1)."""
    if c.dim == 1:
        return c.face_midpoints[:, None, :], np.ones(1)
    x, w = _gauss_nodes(c.quadrature_order)
    along = np.zeros((c.n_faces, c.dim))
    along[np.arange(c.n_faces), 1 - c.face_axis] = 1.0
    points = c.face_midpoints[:, None, :] + ((x - 0.5) * c.h)[None, :, None] * along[:, None, :]
    return points, w * c.h


# ============================================
# 2. Geometry snapshots
# ============================================
def snapshot(c: CellComplex, m: MetricField, t: float) -> GeometrySnapshot:
    """
    Cell volumes and face geometry at time t.

    Raises:
        GeometryError: metric not positive definite at a quadrature point
    """
    if m.dim != c.dim:
        raise UsageError(f"metric {m.name} has dim {m.dim}, grid has dim {c.dim}")

    points, weights = cell_quadrature(c)
    g = metric_tensor(m, points, t)
    check_positive_definite(g, points, t, m.name)
    cell_volumes = volume_factor(g) @ weights

    faces = np.arange(c.n_faces)
    axis = c.face_axis
    g_mid = metric_tensor(m, c.face_midpoints, t)
    check_positive_definite(g_mid, c.face_midpoints, t, m.name)
    g_inv_mid = np.linalg.inv(g_mid)
    g_aa = g_inv_mid[faces, axis, axis]

    face_normals = np.zeros((c.n_faces, c.dim))
    face_normals[faces, axis] = 1.0 / np.sqrt(g_aa)

    if c.dim == 1:
        face_measures = np.ones(c.n_faces)
        face_flux_measures = np.ones(c.n_faces)
    else:
        f_points, f_weights = _face_quadrature(c)
        g_face = metric_tensor(m, f_points, t)
        along = (1 - axis)[:, None]
        nodes = np.arange(g_face.shape[1])[None, :]
        g_tangent = g_face[faces[:, None], nodes, along, along]  # (F, Q)
        face_measures = np.sqrt(g_tangent) @ f_weights
        face_flux_measures = (volume_factor(g_face) @ f_weights) * np.sqrt(g_aa)

    face_diffusion = (
        volume_factor(g_mid)[:, None] * g_inv_mid[faces, axis, :] * c.h ** (c.dim - 1)
    )

    return GeometrySnapshot(
        t=float(t),
        cell_volumes=cell_volumes,
        face_measures=face_measures,
        face_normals=face_normals,
        face_flux_measures=face_flux_measures,
        face_diffusion=face_diffusion,
    )


def cell_average(c: CellComplex, m: MetricField, t: float, fn) -> np.ndarray:
    """Volume-weighted cell averages (1/V_K) int_K fn dV of a function of r."""
    points, weights = cell_quadrature(c)
    dv = volume_factor(metric_tensor(m, points, t)) * weights
    values = np.asarray(fn(points), dtype=float)
    return np.sum(values * dv, axis=1) / np.sum(dv, axis=1)


def restrict(fine: CellComplex, coarse: CellComplex, u: np.ndarray, volumes: np.ndarray) -> np.ndarray:
    """
    Volume-weighted restriction of fine-grid averages onto a coarser grid.

    Raises:
        UsageError: the fine resolution is not an integer multiple of the coarse one
    """
    if fine.dim != coarse.dim or fine.n % coarse.n:
        raise UsageError(f"cannot restrict n={fine.n} onto n={coarse.n}")
    factor = fine.n // coarse.n
    index = np.indices((fine.n,) * fine.dim).reshape(fine.dim, -1) // factor
    target = np.ravel_multi_index(index, (coarse.n,) * coarse.dim)
    mass = np.bincount(target, weights=u * volumes, minlength=coarse.n_cells)
    vol = np.bincount(target, weights=volumes, minlength=coarse.n_cells)
    return mass / vol


# ============================================
# 3. Face operators
# ============================================
def cell_divergence(c: CellComplex, face_values: np.ndarray) -> np.ndarray:
    """
    Sum of oriented face contributions per cell: outflow through upper
    faces minus inflow through lower faces, accumulated axis by axis.
    """
    out = np.zeros(c.n_cells)
    for a in range(c.dim):
        out += face_values[c.upper_faces(a)] - face_values[c.lower_faces[a]]
    return out


def face_gradient(c: CellComplex, u: np.ndarray) -> np.ndarray:
    """
    Chart gradient d_j u at every face, shape (F, d).

    The component across the face is the jump over h; components along
    the face average the centered differences of the two adjacent cells.
    """
    left, right = c.face_left, c.face_right
    grad = np.zeros((c.n_faces, c.dim))
    for j in range(c.dim):
        lo, hi = c.side_neighbors[j, 0], c.side_neighbors[j, 1]
        centered = (u[hi] - u[lo]) / (2 * c.h)
        grad[:, j] = 0.5 * (centered[left] + centered[right])
    across = (u[right] - u[left]) / c.h
    grad[np.arange(c.n_faces), c.face_axis] = across
    return grad


def diffusive_face_flux(c: CellComplex, snap: GeometrySnapshot, u: np.ndarray) -> np.ndarray:
    """int_face sqrt(g) g^{aj} d_j u, oriented left -> right."""
    return np.einsum("fj,fj->f", snap.face_diffusion, face_gradient(c, u))


def face_transmissibility(c: CellComplex, snap: GeometrySnapshot) -> np.ndarray:
    """Upper bound of the weight a face puts on a neighbouring cell value."""
    return np.abs(snap.face_diffusion).sum(axis=1) / c.h
