# mclaw/services/oracle.py
"""
Characteristics oracle for smooth solutions.

Along dr/dt = d_u f(r, t, u) the density obeys du/dt = -lambda u - div^x f(r, t, u).
u(p, t) is found by solving X(r0, t) = p for the foot point r0 with
Newton's method on the flow map; the density carried by the converged
characteristic is the answer. Both are integrated with classical RK4.
"""

import logging

import numpy as np

from mclaw.errors import OracleError
from mclaw.models.flux import FluxField
from mclaw.models.geometry import ChartPoint, MetricField
from mclaw.models.grid import CellComplex
from mclaw.services.flux import divx
from mclaw.services.geometry import (
    compression_rate,
    log_volume_gradient,
    metric_space_derivative,
    metric_tensor,
    volume_factor,
)
from mclaw.services.grid import cell_quadrature

logger = logging.getLogger(__name__)

FOOT_TOL = 1e-10
MAX_NEWTON = 50
JACOBIAN_STEP = 1e-6


def _wrap(x: np.ndarray) -> np.ndarray:
    """Shortest periodic representative in [-1/2, 1/2)."""
    return (x + 0.5) % 1.0 - 0.5


class _StageGeometry:
    """
    lambda and d_i log sqrt(det g) along a flow.

    The last evaluation is kept; RK4 stages that revisit the same (r, t),
    as happens whenever the characteristics stand still, reuse it.
    """

    def __init__(self, metric: MetricField):
        self.metric = metric
        self._key: tuple[float, np.ndarray] | None = None
        self._value: tuple[np.ndarray, np.ndarray] | None = None

    def __call__(self, r: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray]:
        if self._key is not None and self._key[0] == t and np.array_equal(self._key[1], r):
            return self._value
        g_inv = np.linalg.inv(metric_tensor(self.metric, r, t))
        lam, _ = compression_rate(self.metric, r, t, g_inv)
        grad = log_volume_gradient(g_inv, metric_space_derivative(self.metric, r, t))
        self._key, self._value = (t, r.copy()), (lam, grad)
        return self._value


def _rhs(flux: FluxField, geometry: _StageGeometry, r: np.ndarray, t: float, u: np.ndarray):
    x = r % 1.0
    lam, grad = geometry(x, t)
    dr = flux.du_components(x, t, u)
    du = -lam * u - divx(flux, geometry.metric, x, t, u, volume_gradient=grad)
    return dr, du


def flow(
    flux: FluxField,
    metric: MetricField,
    r0: np.ndarray,
    u_start: np.ndarray,
    t_end: float,
    ode_steps: int,
) -> tuple[np.ndarray, np.ndarray]:
    """RK4 integration of the characteristic system from t = 0; r is not wrapped."""
    geometry = _StageGeometry(metric)
    r, u = np.array(r0, dtype=float), np.array(u_start, dtype=float)
    h = t_end / ode_steps
    t = 0.0
    for _ in range(ode_steps):
        k1r, k1u = _rhs(flux, geometry, r, t, u)
        k2r, k2u = _rhs(flux, geometry, r + 0.5 * h * k1r, t + 0.5 * h, u + 0.5 * h * k1u)
        k3r, k3u = _rhs(flux, geometry, r + 0.5 * h * k2r, t + 0.5 * h, u + 0.5 * h * k2u)
        k4r, k4u = _rhs(flux, geometry, r + h * k3r, t + h, u + h * k3u)
        r = r + (h / 6.0) * (k1r + 2 * k2r + 2 * k3r + k4r)
        u = u + (h / 6.0) * (k1u + 2 * k2u + 2 * k3u + k4u)
        t += h
    return r, u


def characteristics_solution(
    u0,
    flux: FluxField,
    metric: MetricField,
    points: np.ndarray,
    t_end: float,
    ode_steps: int = 200,
) -> np.ndarray:
    """
    u(p, t_end) at every point p of an (P, d) array.

    Raises:
        OracleError: foot-point iteration did not converge or characteristics
            have crossed (near-shock data)
    """
    p = np.asarray(points, dtype=float) % 1.0
    if t_end == 0.0:
        return np.asarray(u0(p), dtype=float)
    if flux.stationary:
        # every point is its own foot point
        _, u = flow(flux, metric, p, u0(p), t_end, ode_steps)
        return u

    P, d = p.shape
    r0 = (p - t_end * flux.du_components(p, 0.0, u0(p))) % 1.0
    offsets = np.concatenate([JACOBIAN_STEP * np.eye(d), -JACOBIAN_STEP * np.eye(d)])

    for iteration in range(MAX_NEWTON):
        X, u = flow(flux, metric, r0, u0(r0), t_end, ode_steps)
        residual = _wrap(p - X)
        starts = (r0[None, :, :] + offsets[:, None, :]).reshape(-1, d)
        Xs, _ = flow(flux, metric, starts, u0(starts % 1.0), t_end, ode_steps)
        Xs = Xs.reshape(len(offsets), P, d)
        jac = (Xs[:d] - Xs[d:]) / (2 * JACOBIAN_STEP)  # [k, P, a] = dX^a / dr0^k
        jac = np.transpose(jac, (1, 2, 0))
        if np.abs(residual).max() <= FOOT_TOL:
            # a folded flow map means the foot point is one of several
            if np.any(np.linalg.det(jac) <= 0):
                raise OracleError("flow map is not orientation preserving: characteristics have crossed")
            break
        try:
            r0 = (r0 + np.linalg.solve(jac, residual[..., None])[..., 0]) % 1.0
        except np.linalg.LinAlgError:
            raise OracleError("singular flow map: characteristics have crossed")
    else:
        worst = float(np.abs(residual).max())
        raise OracleError(
            f"foot-point iteration did not converge (residual {worst:.3e} after {MAX_NEWTON} steps)"
        )

    logger.debug("foot points converged after %s Newton steps", iteration)
    return u


def characteristics_oracle(
    u0,
    flux: FluxField,
    metric: MetricField,
    p: ChartPoint,
    t_end: float,
    ode_steps: int = 200,
) -> float:
    return float(characteristics_solution(u0, flux, metric, p.as_array()[None, :], t_end, ode_steps)[0])


def oracle_cell_averages(
    u0,
    flux: FluxField,
    metric: MetricField,
    cells: CellComplex,
    t: float,
    ode_steps: int = 200,
) -> np.ndarray:
    """(1/V_K) int_K u(., t) dV of the oracle solution by cell quadrature."""
    points, weights = cell_quadrature(cells)
    N, Q, d = points.shape
    values = characteristics_solution(u0, flux, metric, points.reshape(-1, d), t, ode_steps).reshape(N, Q)
    dv = volume_factor(metric_tensor(metric, points, t)) * weights
    return np.sum(values * dv, axis=1) / np.sum(dv, axis=1)
