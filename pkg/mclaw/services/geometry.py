# mclaw/services/geometry.py
"""
Metric evaluation and metric-derived quantities.

Array functions take r of shape (..., d) and a float t and return
values with matching leading shape. The *_at functions wrap them for a
single ChartPoint and return a GeometricSample or a small array.

Index conventions:
    g[..., i, j]            metric g_ij
    dg[..., k, i, j]        d_k g_ij
    gamma[..., k, i, j]     Christoffel symbol Gamma^k_ij
"""

import logging
import math

import numpy as np

from mclaw.errors import GeometryError
from mclaw.models.geometry import ChartPoint, GeometricSample, MetricField

logger = logging.getLogger(__name__)


# ============================================
# 1. Metric tensor and its derivatives
# ============================================
def _jacobian(m: MetricField, r: np.ndarray, t: float) -> np.ndarray:
    """d_i X^a, analytic when available, centered differences of X otherwise."""
    if m.jacobian is not None:
        return m.jacobian(r, t)
    h = m.fd_step
    rows = []
    for i in range(m.dim):
        e = np.zeros(m.dim)
        e[i] = h
        rows.append((m.embedding(r + e, t) - m.embedding(r - e, t)) / (2 * h))
    return np.stack(rows, axis=-2)


def _pullback(J: np.ndarray, K: np.ndarray | None = None) -> np.ndarray:
    """J K^T contracted over the ambient index; symmetric part when K differs."""
    if K is None:
        return np.einsum("...ia,...ja->...ij", J, J)
    JK = np.einsum("...ia,...ja->...ij", J, K)
    return JK + np.swapaxes(JK, -1, -2)


def metric_tensor(m: MetricField, r: np.ndarray, t: float) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if m.tensor is not None:
        g = m.tensor(r, t)
    else:
        g = _pullback(_jacobian(m, r, t))
    return 0.5 * (g + np.swapaxes(g, -1, -2))


def metric_space_derivative(m: MetricField, r: np.ndarray, t: float) -> np.ndarray:
    """d_k g_ij with shape (..., d, d, d)."""
    r = np.asarray(r, dtype=float)
    if m.tensor_dr is not None:
        dg = m.tensor_dr(r, t)
    elif m.jacobian is not None and m.jacobian_dr is not None:
        J = m.jacobian(r, t)
        dJ = m.jacobian_dr(r, t)
        dg = _pullback(dJ, J[..., None, :, :])
    else:
        h = m.fd_step
        parts = []
        for k in range(m.dim):
            e = np.zeros(m.dim)
            e[k] = h
            parts.append((metric_tensor(m, r + e, t) - metric_tensor(m, r - e, t)) / (2 * h))
        dg = np.stack(parts, axis=-3)
    return 0.5 * (dg + np.swapaxes(dg, -1, -2))


def _time_stencil(m: MetricField, t: float) -> tuple[float, str]:
    """Step and stencil kind for a time difference that stays inside t_range."""
    h = m.fd_step * max(1.0, abs(t))
    lo, hi = m.t_range
    if t - h >= lo and t + h <= hi:
        return h, "centered"
    if t + 2 * h <= hi:
        return h, "forward"
    return h, "backward"


def _time_difference(fn, t: float, h: float, kind: str):
    if kind == "centered":
        return (fn(t + h) - fn(t - h)) / (2 * h)
    if kind == "forward":
        return (-3 * fn(t) + 4 * fn(t + h) - fn(t + 2 * h)) / (2 * h)
    return (3 * fn(t) - 4 * fn(t - h) + fn(t - 2 * h)) / (2 * h)


def metric_time_derivative(
    m: MetricField, r: np.ndarray, t: float
) -> tuple[np.ndarray, bool]:
    """
    d_t g_ij and whether a one-sided stencil was needed.

    Static metrics return exact zeros.
    """
    r = np.asarray(r, dtype=float)
    shape = r.shape[:-1] + (m.dim, m.dim)
    if m.static:
        return np.zeros(shape), False
    if m.tensor_dt is not None:
        dg = m.tensor_dt(r, t)
        return 0.5 * (dg + np.swapaxes(dg, -1, -2)), False
    if m.jacobian is not None and m.jacobian_dt is not None:
        return _pullback(m.jacobian_dt(r, t), m.jacobian(r, t)), False

    h, kind = _time_stencil(m, t)
    if kind != "centered":
        logger.warning("one-sided %s time difference for %s at t=%s", kind, m.name, t)
    return _time_difference(lambda s: metric_tensor(m, r, s), t, h, kind), kind != "centered"


# ============================================
# 2. Volume factor, inverse and compression rate
# ============================================
def check_positive_definite(g: np.ndarray, r: np.ndarray, t: float, name: str = "metric") -> None:
    """
    Raises:
        GeometryError: at the first sample whose smallest eigenvalue is <= 0
    """
    eig = np.atleast_1d(np.linalg.eigvalsh(g)[..., 0]).ravel()
    bad = ~(eig > 0)
    if np.any(bad):
        r = np.asarray(r, dtype=float)
        points = r.reshape(-1, r.shape[-1])
        idx = int(np.argmax(bad))
        point = tuple(float(x) for x in points[idx % len(points)])
        raise GeometryError(
            f"{name} is not positive definite at r={point}, t={t} "
            f"(smallest eigenvalue {eig[idx]})"
        )


def volume_factor(g: np.ndarray) -> np.ndarray:
    """sqrt(det g)."""
    return np.sqrt(np.linalg.det(g))


def log_volume_gradient(g_inv: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """d_i log sqrt(det g) = 1/2 g^{jk} d_i g_jk."""
    return 0.5 * np.einsum("...jk,...ijk->...i", g_inv, dg)


def compression_rate(
    m: MetricField, r: np.ndarray, t: float, g_inv: np.ndarray | None = None
) -> tuple[np.ndarray, bool]:
    """
    lambda = d_t log sqrt(det g) and the one-sided flag.

    With an analytic d_t g this is 1/2 tr(g^-1 d_t g); otherwise log sqrt(det g)
    itself is differenced in time. g_inv, when given, is the inverse metric at (r, t).
    """
    r = np.asarray(r, dtype=float)
    if m.static:
        return np.zeros(r.shape[:-1]), False
    analytic = m.tensor_dt is not None or (
        m.jacobian is not None and m.jacobian_dt is not None
    )
    if analytic:
        if g_inv is None:
            g_inv = np.linalg.inv(metric_tensor(m, r, t))
        dg, _ = metric_time_derivative(m, r, t)
        return 0.5 * np.einsum("...ij,...ji->...", g_inv, dg), False

    h, kind = _time_stencil(m, t)
    if kind != "centered":
        logger.warning("one-sided %s time difference for %s at t=%s", kind, m.name, t)
    log_vol = lambda s: 0.5 * np.log(np.linalg.det(metric_tensor(m, r, s)))  # noqa: E731
    return _time_difference(log_vol, t, h, kind), kind != "centered"


# ============================================
# 3. Connection and curvature
# ============================================
def christoffel(g_inv: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)."""
    lowered = dg + np.swapaxes(dg, -3, -2) - np.moveaxis(dg, -3, -1)  # [i, j, l]
    gamma = 0.5 * np.einsum("...kl,...ijl->...kij", g_inv, lowered)
    return 0.5 * (gamma + np.swapaxes(gamma, -1, -2))


def christoffel_field(m: MetricField, r: np.ndarray, t: float) -> np.ndarray:
    g = metric_tensor(m, r, t)
    return christoffel(np.linalg.inv(g), metric_space_derivative(m, r, t))


def ricci(m: MetricField, r: np.ndarray, t: float) -> np.ndarray:
    """
    Ricci tensor R_ij = d_k G^k_ij - d_j G^k_ik + G^k_kl G^l_ij - G^k_jl G^l_ik.

    Derivatives of the Christoffel symbols are centered differences.
    Curves carry no intrinsic curvature, so d = 1 returns zeros.
    """
    r = np.asarray(r, dtype=float)
    d = m.dim
    if d == 1:
        return np.zeros(r.shape[:-1] + (1, 1))

    analytic = m.tensor_dr is not None or m.jacobian_dr is not None
    h = m.fd_step if analytic else math.sqrt(m.fd_step)
    parts = []
    for k in range(d):
        e = np.zeros(d)
        e[k] = h
        parts.append((christoffel_field(m, r + e, t) - christoffel_field(m, r - e, t)) / (2 * h))
    dG = np.stack(parts, axis=-4)  # [m, k, i, j] = d_m Gamma^k_ij
    G = christoffel_field(m, r, t)

    ric = (
        np.einsum("...kkij->...ij", dG)
        - np.einsum("...jkik->...ij", dG)
        + np.einsum("...kkl,...lij->...ij", G, G)
        - np.einsum("...kjl,...lik->...ij", G, G)
    )
    return 0.5 * (ric + np.swapaxes(ric, -1, -2))


def relative_eigenvalues(form: np.ndarray, g: np.ndarray) -> np.ndarray:
    """
    Eigenvalues of a symmetric bilinear form relative to g, ascending.

    These are the extreme values of form(X, X) over g-unit vectors X.
    """
    L_inv = np.linalg.inv(np.linalg.cholesky(g))
    whitened = L_inv @ form @ np.swapaxes(L_inv, -1, -2)
    return np.linalg.eigvalsh(0.5 * (whitened + np.swapaxes(whitened, -1, -2)))


def ricci_norm(m: MetricField, r: np.ndarray, t: float) -> np.ndarray:
    """Operator norm of ric relative to g."""
    if m.dim == 1:
        return np.zeros(np.asarray(r).shape[:-1])
    g = metric_tensor(m, r, t)
    return np.abs(relative_eigenvalues(ricci(m, r, t), g)).max(axis=-1)


# ============================================
# 4. Point operations
# ============================================
def _check_point(m: MetricField, p: ChartPoint) -> None:
    if p.dim != m.dim:
        raise GeometryError(f"point {p.r} has dimension {p.dim}, metric {m.name} has {m.dim}")


def metric_at(m: MetricField, p: ChartPoint) -> GeometricSample:
    """g, g^-1 and sqrt(det g) at p."""
    _check_point(m, p)
    r = p.as_array()
    g = metric_tensor(m, r, p.t)
    check_positive_definite(g, r, p.t, m.name)
    return GeometricSample(
        point=p,
        g=g,
        g_inv=np.linalg.inv(g),
        sqrt_det_g=float(volume_factor(g)),
    )


def lambda_at(m: MetricField, p: ChartPoint) -> float:
    _check_point(m, p)
    lam, _ = compression_rate(m, p.as_array(), p.t)
    return float(lam)


def christoffel_at(m: MetricField, p: ChartPoint) -> np.ndarray:
    _check_point(m, p)
    return christoffel_field(m, p.as_array(), p.t)


def ricci_at(m: MetricField, p: ChartPoint) -> np.ndarray:
    _check_point(m, p)
    return ricci(m, p.as_array(), p.t)


def sample_at(m: MetricField, p: ChartPoint) -> GeometricSample:
    """Every metric-derived quantity at p."""
    base = metric_at(m, p)
    r = p.as_array()
    lam, one_sided = compression_rate(m, r, p.t)
    dt_g, _ = metric_time_derivative(m, r, p.t)
    return GeometricSample(
        point=p,
        g=base.g,
        g_inv=base.g_inv,
        sqrt_det_g=base.sqrt_det_g,
        compression_rate=float(lam),
        christoffel=christoffel(base.g_inv, metric_space_derivative(m, r, p.t)),
        ricci=ricci(m, r, p.t),
        dt_g=dt_g,
        one_sided_time_difference=one_sided,
    )


def laplace_beltrami_apply(m: MetricField, field: np.ndarray, t: float, cells) -> np.ndarray:
    """
    (1/sqrt g) d_i(sqrt g g^{ij} d_j u) on the cells of a CellComplex.

    Shares the face discretization of the viscous term of the solver,
    so constant fields map to exact zeros.
    """
    # Local import to avoid circular imports
    from mclaw.services.grid import cell_divergence, diffusive_face_flux, snapshot

    snap = snapshot(cells, m, t)
    flux = diffusive_face_flux(cells, snap, np.asarray(field, dtype=float))
    return cell_divergence(cells, flux) / snap.cell_volumes
