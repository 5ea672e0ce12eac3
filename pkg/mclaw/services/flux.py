# mclaw/services/flux.py
"""
Flux-field operations: spatial divergence at fixed u, the Killing
defect of d_u f, and the sampled estimate constants c2..c7.

Array functions take r (..., d), a float t and u broadcastable against
r[..., 0]. Sampling over a range of u uses r of shape (P, 1, d) with u
of shape (P, S).
"""

import logging

import numpy as np

from mclaw.models.flux import FluxField
from mclaw.models.geometry import ChartPoint, MetricField
from mclaw.schemas.report import CConstants
from mclaw.services.geometry import (
    christoffel,
    compression_rate,
    log_volume_gradient,
    metric_space_derivative,
    metric_tensor,
    metric_time_derivative,
    relative_eigenvalues,
    volume_factor,
)

logger = logging.getLogger(__name__)

U_SAMPLES = 65


# ============================================
# 1. Derivatives of the flux
# ============================================
def _space_jacobian(fn, analytic, f: FluxField, r, t, u) -> np.ndarray:
    """[..., k, i] = d_k fn^i, analytic when given, centered differences otherwise."""
    if analytic is not None:
        return analytic(r, t, u)
    h = f.fd_step
    parts = []
    for k in range(f.dim):
        e = np.zeros(f.dim)
        e[k] = h
        parts.append((fn(r + e, t, u) - fn(r - e, t, u)) / (2 * h))
    return np.stack(parts, axis=-2)


def flux_space_jacobian(f: FluxField, r, t: float, u) -> np.ndarray:
    return _space_jacobian(f.components, f.dr_components, f, np.asarray(r, dtype=float), t, u)


def flux_du_space_jacobian(f: FluxField, r, t: float, u) -> np.ndarray:
    return _space_jacobian(f.du_components, f.dr_du_components, f, np.asarray(r, dtype=float), t, u)


def _metric_terms(m: MetricField, r: np.ndarray, t: float):
    g = metric_tensor(m, r, t)
    g_inv = np.linalg.inv(g)
    dg = metric_space_derivative(m, r, t)
    return g, g_inv, dg


def divx(f: FluxField, m: MetricField, r, t: float, u, volume_gradient: np.ndarray | None = None) -> np.ndarray:
    """
    div^x f = d_i f^i + f^i d_i log sqrt(det g), u held fixed.

    volume_gradient, when given, is d_i log sqrt(det g) at (r, t).
    """
    r = np.asarray(r, dtype=float)
    if volume_gradient is None:
        _, g_inv, dg = _metric_terms(m, r, t)
        volume_gradient = log_volume_gradient(g_inv, dg)
    trace = np.einsum("...ii->...", flux_space_jacobian(f, r, t, u))
    return trace + np.einsum("...i,...i->...", f.components(r, t, u), volume_gradient)


def du_divx(f: FluxField, m: MetricField, r, t: float, u) -> np.ndarray:
    """d_u div^x f."""
    r = np.asarray(r, dtype=float)
    _, g_inv, dg = _metric_terms(m, r, t)
    trace = np.einsum("...ii->...", flux_du_space_jacobian(f, r, t, u))
    return trace + np.einsum("...i,...i->...", f.du_components(r, t, u), log_volume_gradient(g_inv, dg))


def killing_form(f: FluxField, m: MetricField, r, t: float, u) -> np.ndarray:
    """
    Symmetrized covariant differential of Y = d_u f with lowered indices,
    1/2 (nabla_i Y_j + nabla_j Y_i), nabla_i Y_j = g_jk (d_i Y^k + Gamma^k_il Y^l).
    """
    r = np.asarray(r, dtype=float)
    g, g_inv, dg = _metric_terms(m, r, t)
    gamma = christoffel(g_inv, dg)
    Y = f.du_components(r, t, u)
    dY = flux_du_space_jacobian(f, r, t, u)  # [i, k] = d_i Y^k
    nabla = dY + np.einsum("...kil,...l->...ik", gamma, Y)
    lowered = np.einsum("...ik,...jk->...ij", nabla, g)
    return 0.5 * (lowered + np.swapaxes(lowered, -1, -2))


def killing_defect_field(f: FluxField, m: MetricField, r, t: float, u) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    g = metric_tensor(m, r, t)
    form = killing_form(f, m, r, t, u)
    g = np.broadcast_to(g, form.shape)
    return np.abs(relative_eigenvalues(form, g)).max(axis=-1)


def speed_norm(f: FluxField, m: MetricField, r, t: float, u) -> np.ndarray:
    """|d_u f|_g."""
    r = np.asarray(r, dtype=float)
    g = metric_tensor(m, r, t)
    Y = f.du_components(r, t, u)
    return np.sqrt(np.einsum("...i,...ij,...j->...", Y, g, Y))


# ============================================
# 2. Point operations
# ============================================
def divx_at(f: FluxField, m: MetricField, p: ChartPoint, u: float) -> float:
    return float(divx(f, m, p.as_array(), p.t, float(u)))


def killing_defect(f: FluxField, m: MetricField, p: ChartPoint, u: float) -> float:
    """Largest |eigenvalue| of the symmetrized covariant differential of d_u f relative to g."""
    return float(killing_defect_field(f, m, p.as_array(), p.t, float(u)))


# ============================================
# 3. Estimate constants
# ============================================
def sample_points(dim: int, resolution: int) -> np.ndarray:
    """Midpoints of a uniform resolution^dim grid, shape (P, d)."""
    index = np.indices((resolution,) * dim).reshape(dim, -1).T
    return (index + 0.5) / resolution


def u_samples(f: FluxField, u_max: float, count: int = U_SAMPLES) -> np.ndarray:
    """Evenly spaced values on [-u_max, u_max] plus the declared breakpoints inside."""
    if u_max <= 0:
        return np.zeros(1)
    values = np.linspace(-u_max, u_max, count)
    inside = [b for b in f.u_breakpoints if -u_max < b < u_max]
    return np.unique(np.concatenate([values, np.asarray(inside, dtype=float)]))


def _gradient_norm(values_at, r: np.ndarray, h: float, g_inv: np.ndarray) -> np.ndarray:
    """|grad phi|_g by centered differences of values_at(r)."""
    dim = r.shape[-1]
    parts = []
    for k in range(dim):
        e = np.zeros(dim)
        e[k] = h
        parts.append((values_at(r + e) - values_at(r - e)) / (2 * h))
    grad = np.stack(parts, axis=-1)
    return np.sqrt(np.maximum(np.einsum("...i,...ij,...j->...", grad, g_inv, grad), 0.0))


def c_constants_sample(
    f: FluxField, m: MetricField, t: float, u_max: float, resolution: int
) -> CConstants:
    """
    Sampled c2..c7 at time t.

    Infima over tangent directions are smallest eigenvalues relative to g;
    each smallest eigenvalue entering c4 is clamped at zero, so the
    infimum ranges over vectors with |X|_g <= 1. L1 norms use midpoint
    quadrature with dV on a resolution^d grid.
    """
    d = m.dim
    P = sample_points(d, resolution)
    Pu = P[:, None, :]
    us = u_samples(f, u_max)
    U = np.broadcast_to(us, (len(P), len(us)))

    g = metric_tensor(m, P, t)
    g_inv = np.linalg.inv(g)
    dv = volume_factor(g) / resolution**d
    lam, _ = compression_rate(m, P, t)

    # c2, c3
    c2 = -float(lam.min()) - float(du_divx(f, m, Pu, t, U).min())
    c3 = float(np.abs(divx(f, m, P, t, 0.0)).max())

    # c4
    dt_g, _ = metric_time_derivative(m, P, t)
    motion = float(relative_eigenvalues(dt_g, g)[:, 0].min())
    form = killing_form(f, m, Pu, t, U)
    flow = float(relative_eigenvalues(form, np.broadcast_to(g[:, None], form.shape))[..., 0].min())
    c4 = -min(motion, 0.0) - min(flow, 0.0)

    # c5, c6
    h = m.fd_step
    grad_lam = _gradient_norm(lambda r: compression_rate(m, r, t)[0], P, h, g_inv)
    grad_div = _gradient_norm(lambda r: divx(f, m, r, t, U), Pu, h, g_inv[:, None])
    sup_div = np.abs(divx(f, m, Pu, t, U)).max(axis=1)
    c5 = u_max * float(grad_lam @ dv) + float(grad_div.max(axis=1) @ dv)
    c6 = float(sup_div @ dv)

    # c7
    c7 = float(speed_norm(f, m, Pu, t, U).max())

    logger.debug(
        "c-constants t=%s u_max=%s: c2=%s c3=%s c4=%s c5=%s c6=%s c7=%s",
        t, u_max, c2, c3, c4, c5, c6, c7,
    )
    return CConstants(
        t=float(t),
        c2=c2,
        c3=c3,
        c4=c4,
        c5=c5,
        c6=c6,
        c7=c7,
        u_max=float(u_max),
        sample_resolution=resolution,
        u_samples=len(us),
    )
