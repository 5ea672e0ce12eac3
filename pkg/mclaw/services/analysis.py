# mclaw/services/analysis.py
"""
Measurements on trajectories and the closed-form envelopes they are
compared against.

Envelope integrals over sampled c-series use the upper endpoint rule
on every sample interval, so time sampling never makes an envelope
smaller than the exact formula would for monotone pieces.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from mclaw.config import get_settings
from mclaw.errors import UsageError
from mclaw.models.flux import FluxField
from mclaw.models.geometry import MetricField
from mclaw.models.grid import CellComplex, GeometrySnapshot
from mclaw.models.state import State, StepRecord, Trajectory
from mclaw.schemas.config import SchemeConfig
from mclaw.schemas.report import CConstants
from mclaw.services.flux import c_constants_sample, divx, sample_points
from mclaw.services.geometry import compression_rate, ricci_norm
from mclaw.services.grid import cell_divergence
from mclaw.services.solver import two_point_flux

logger = logging.getLogger(__name__)


# ============================================
# 1. Envelopes
# ============================================
def cumulative_integral(values: Sequence[float], times: Sequence[float]) -> np.ndarray:
    """
    int_0^t_i of a sampled series, starting at 0.

    Each interval takes the larger of its two endpoint values times its
    length, which is never below the trapezoidal value on that interval
    (max >= mean). The exponent of every Gronwall factor is therefore at
    least its trapezoidal estimate.
    """
    values = np.asarray(values, dtype=float)
    times = np.asarray(times, dtype=float)
    if len(times) < 2:
        return np.zeros(len(times))
    upper = np.maximum(values[1:], values[:-1]) * np.diff(times)
    return np.concatenate([[0.0], np.cumsum(upper)])


def _gronwall(rate, forcing, start: float, times) -> np.ndarray:
    """start * e^{int rate} + int_0^t e^{int_s^t rate} forcing ds."""
    C = cumulative_integral(rate, times)
    pushed = np.exp(-C) * np.asarray(forcing, dtype=float)
    return np.exp(C) * (start + cumulative_integral(pushed, times))


def linf_envelope(c2_series, c3_series, u0_linf: float, times) -> np.ndarray:
    """||u(t)||_inf <= ||u0|| e^{int c2} + int e^{int c2} c3."""
    return _gronwall(c2_series, c3_series, u0_linf, times)


def tv_envelope(
    c4_series,
    c5_series,
    tv0: float,
    times,
    epsilon: float = 0.0,
    ricci_linf_series=None,
) -> np.ndarray:
    """
    TV(u(t)) <= e^{int c4} tv0 + int c5 e^{int c4}, times exp(eps * int ||ric||_inf)
    over the whole interval when eps > 0.
    """
    envelope = _gronwall(c4_series, c5_series, tv0, times)
    if epsilon > 0 and ricci_linf_series is not None:
        total = cumulative_integral(ricci_linf_series, times)[-1]
        envelope = envelope * math.exp(epsilon * total)
    return envelope


@dataclass(frozen=True)
class Envelopes:
    """Envelopes on the sample times plus the constants they came from."""

    times: np.ndarray
    constants: tuple[CConstants, ...]
    linf: np.ndarray
    tv: np.ndarray
    ricci_linf: np.ndarray
    u_max: float
    tv_max: float
    rounds: int
    converged: bool

    def at(self, times) -> tuple[np.ndarray, np.ndarray]:
        """(linf, tv) envelopes interpolated at the given times."""
        return np.interp(times, self.times, self.linf), np.interp(times, self.times, self.tv)

    def series(self, name: str) -> np.ndarray:
        return np.array([getattr(c, name) for c in self.constants])


def envelope_times(metric: MetricField, flux: FluxField, t_end: float, extra=(), samples: int | None = None) -> np.ndarray:
    """Quadrature times: one sample for static metrics with autonomous fluxes."""
    if metric.static and flux.autonomous:
        return np.array([0.0])
    samples = samples or get_settings().envelope_time_samples
    grid = np.linspace(0.0, t_end, samples)
    return np.unique(np.concatenate([grid, np.asarray(extra, dtype=float)]))


def _sample_constants(flux, metric, times, u_max, resolution, threads) -> list[CConstants]:
    if threads > 1 and len(times) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(
                pool.map(lambda t: c_constants_sample(flux, metric, t, u_max, resolution), times)
            )
    return [c_constants_sample(flux, metric, t, u_max, resolution) for t in times]


def _expand(times: np.ndarray, values: np.ndarray, t_end: float) -> tuple[np.ndarray, np.ndarray]:
    """A single time sample stands for a constant series on [0, t_end]."""
    if len(times) == 1:
        return np.array([0.0, t_end]), np.repeat(values, 2)
    return times, values


def compute_envelopes(
    flux: FluxField,
    metric: MetricField,
    u0_linf: float,
    tv0: float,
    t_end: float,
    epsilon: float = 0.0,
    resolution: int = 64,
    extra_times=(),
    max_rounds: int = 12,
    rtol: float = 1e-9,
) -> Envelopes:
    """
    Sample the c-constants over time and build both envelopes.

    c2 depends on u_max, which is itself the maximum of the L-inf envelope;
    u_max is iterated from ||u0||_inf to a fixed point.
    """
    settings = get_settings()
    sample_t = envelope_times(metric, flux, t_end, extra_times)

    u_max, converged, rounds = float(u0_linf), False, 0
    while rounds < max_rounds:
        rounds += 1
        constants = _sample_constants(flux, metric, sample_t, u_max, resolution, settings.threads)
        times, c2 = _expand(sample_t, np.array([c.c2 for c in constants]), t_end)
        _, c3 = _expand(sample_t, np.array([c.c3 for c in constants]), t_end)
        linf = linf_envelope(c2, c3, u0_linf, times)
        new_u_max = float(linf.max())
        logger.debug("u_max round %s: %s -> %s", rounds, u_max, new_u_max)
        if abs(new_u_max - u_max) <= rtol * max(abs(new_u_max), 1e-300):
            u_max, converged = new_u_max, True
            break
        u_max = new_u_max
    if not converged:
        logger.warning("u_max iteration did not converge after %s rounds; using %s", rounds, u_max)

    _, c4 = _expand(sample_t, np.array([c.c4 for c in constants]), t_end)
    _, c5 = _expand(sample_t, np.array([c.c5 for c in constants]), t_end)
    if epsilon > 0 and metric.dim == 2:
        points = sample_points(metric.dim, resolution)
        ric = np.array([float(ricci_norm(metric, points, t).max()) for t in sample_t])
    else:
        ric = np.zeros(len(sample_t))
    _, ric = _expand(sample_t, ric, t_end)
    tv = tv_envelope(c4, c5, tv0, times, epsilon, ric)

    return Envelopes(
        times=times,
        constants=tuple(constants),
        linf=linf,
        tv=tv,
        ricci_linf=ric,
        u_max=u_max,
        tv_max=float(tv.max()),
        rounds=rounds,
        converged=converged,
    )


# ============================================
# 2. Total variation and L1
# ============================================
def discrete_tv(s: State, snap: GeometrySnapshot, cells: CellComplex) -> float:
    """sum over faces of |u_left - u_right| * face measure (1 for points)."""
    jumps = np.abs(s.u[cells.face_left] - s.u[cells.face_right]) * snap.face_measures
    return math.fsum(jumps)


def l1_distance(sA: State, sB: State, snap: GeometrySnapshot) -> float:
    """
    sum |u_A - u_B| V_K(t).

    Raises:
        UsageError: different grids or times
    """
    if sA.u.shape != sB.u.shape or sA.u.shape != snap.cell_volumes.shape:
        raise UsageError(
            f"l1_distance on mismatched grids: {sA.u.shape}, {sB.u.shape}, {snap.cell_volumes.shape}"
        )
    if not math.isclose(sA.t, sB.t, rel_tol=1e-12, abs_tol=1e-14) or not math.isclose(
        sA.t, snap.t, rel_tol=1e-12, abs_tol=1e-14
    ):
        raise UsageError(f"l1_distance at different times: {sA.t}, {sB.t}, snapshot {snap.t}")
    return math.fsum(np.abs(sA.u - sB.u) * snap.cell_volumes)


def l1_contraction_series(a: Trajectory, b: Trajectory) -> list[float]:
    """l1_distance of two runs at each shared output time."""
    if len(a.states) != len(b.states):
        raise UsageError("paired trajectories have different output times")
    return [l1_distance(x, y, snap) for x, y, snap in zip(a.states, b.states, a.snapshots)]


def lipschitz_quotient(trajectory: Trajectory) -> float:
    """
    max over stored s < t of ||u(t) v(t) - u(s) v(s)||_{L1(g(0))} / (t - s),
    with v = V_K(t) / V_K(0); the L1(g(0)) weight cancels the V_K(0).
    """
    weighted = [s.u * snap.cell_volumes for s, snap in zip(trajectory.states, trajectory.snapshots)]
    times = trajectory.times
    best = 0.0
    for j in range(len(weighted)):
        for i in range(j):
            gap = times[j] - times[i]
            if gap <= 0:
                continue
            best = max(best, math.fsum(np.abs(weighted[j] - weighted[i])) / gap)
    return best


def lipschitz_check(trajectory: Trajectory, c6: float, c7: float, tv_max: float) -> tuple[float, float]:
    """(measured max quotient, bound c6 + c7 * tv_max)."""
    if len(trajectory.states) < 2:
        raise UsageError("lipschitz_check needs at least two stored times")
    return lipschitz_quotient(trajectory), c6 + c7 * tv_max


# ============================================
# 3. Entropy
# ============================================
@dataclass(frozen=True)
class EntropyPair:
    """Kruzkov entropy eta(u) = |u - k| and its derivative; the matching flux is built per face in entropy_residual."""

    k: float

    def eta(self, u):
        return np.abs(np.asarray(u, dtype=float) - self.k)

    def eta_prime(self, u):
        return np.sign(np.asarray(u, dtype=float) - self.k)


def kruzkov_pair(k: float) -> EntropyPair:
    return EntropyPair(float(k))


def kruzkov_constants(u_max: float, count: int = 17) -> np.ndarray:
    return np.linspace(-u_max, u_max, count)


def entropy_residual(
    record: StepRecord,
    k: float,
    cells: CellComplex,
    metric: MetricField,
    flux: FluxField,
    scheme: SchemeConfig,
) -> np.ndarray:
    """
    Per-cell Kruzkov balance of one step, divided by V_K(t):

        [eta(u1) V1 - eta(u0) V0] / dt + sum_faces +-Q - S V0,
        S = -sgn(u0 - k) (lambda k + div^x f(x, t, k)).

    In cells where u crosses k during the step the sign ranges over
    [-1, 1] and S is the largest value over that range,
    |lambda k + div^x f(x, t, k)|.

    Q is the numerical entropy flux G(u v k, w v k) - G(u ^ k, w ^ k)
    built from the two-point total face flux G. Entropy solutions give <= 0.
    """
    pair = kruzkov_pair(k)
    before, after = record.before, record.after
    snap0, snap1 = record.snapshot_before, record.snapshot_after
    dt = record.dt
    u0, u1 = before.u, after.u
    V0, V1 = snap0.cell_volumes, snap1.cell_volumes

    uL, uR = u0[cells.face_left], u0[cells.face_right]
    Q = two_point_flux(flux, cells, snap0, np.maximum(uL, k), np.maximum(uR, k), scheme) - two_point_flux(
        flux, cells, snap0, np.minimum(uL, k), np.minimum(uR, k), scheme
    )

    centers = cells.cell_centers
    lam, _ = compression_rate(metric, centers, before.t)
    s = lam * pair.k + divx(flux, metric, centers, before.t, pair.k)
    crossing = (u0 - k) * (u1 - k) <= 0
    source = np.where(crossing, np.abs(s), -pair.eta_prime(u0) * s)

    balance = (pair.eta(u1) * V1 - pair.eta(u0) * V0) / dt + cell_divergence(cells, Q) - source * V0
    return balance / V0


def entropy_residual_max(
    trajectory: Trajectory,
    ks: Sequence[float],
    cells: CellComplex,
    metric: MetricField,
    flux: FluxField,
    scheme: SchemeConfig,
) -> float:
    """Max residual over cells, stored steps and Kruzkov constants."""
    if not trajectory.steps:
        raise UsageError("entropy_residual needs a trajectory with stored steps")
    return max(
        float(entropy_residual(rec, k, cells, metric, flux, scheme).max())
        for rec in trajectory.steps
        for k in ks
    )


@dataclass
class EntropyObserver:
    """Evaluates Kruzkov residuals on the fly, one value per output interval."""

    cells: CellComplex
    metric: MetricField
    flux: FluxField
    scheme: SchemeConfig
    ks: Sequence[float]
    overall: float = -math.inf
    series: list[float] = field(default_factory=list)
    dt_max: float = 0.0
    _window: float = field(default=-math.inf, init=False, repr=False)

    def on_step(self, record: StepRecord) -> None:
        worst = max(
            float(entropy_residual(record, k, self.cells, self.metric, self.flux, self.scheme).max())
            for k in self.ks
        )
        self._window = max(self._window, worst)
        self.overall = max(self.overall, worst)
        self.dt_max = max(self.dt_max, record.dt)

    def on_output(self, state: State, snap: GeometrySnapshot) -> None:
        self.series.append(self._window if self._window > -math.inf else 0.0)
        self._window = -math.inf

    @property
    def constant(self) -> float:
        """Residual scaled by the mesh, max(residual, 0) / (dr + dt)."""
        return max(self.overall, 0.0) / (self.cells.h + self.dt_max)


# ============================================
# 4. Convergence
# ============================================
def eoc_table(
    errors: Sequence[float],
    resolutions: Sequence[int] | None = None,
    scale: float = 1.0,
    exact_tol: float = 1e-13,
) -> list[float | None]:
    """
    Observed orders log(e_a / e_b) / log(n_b / n_a) per consecutive pair.

    Pairs whose errors are both below exact_tol * scale are reported as
    None ("exact").

    Raises:
        UsageError: fewer than two errors or mismatched resolutions
    """
    errors = [float(e) for e in errors]
    if len(errors) < 2:
        raise UsageError("eoc_table needs errors at two or more resolutions")
    if resolutions is None:
        resolutions = [2**i for i in range(len(errors))]
    if len(resolutions) != len(errors):
        raise UsageError("eoc_table: errors and resolutions differ in length")

    orders: list[float | None] = []
    floor = exact_tol * scale
    for (ea, na), (eb, nb) in zip(zip(errors, resolutions), zip(errors[1:], resolutions[1:])):
        if max(ea, eb) <= floor or eb <= 0:
            orders.append(None)
        else:
            orders.append(math.log(ea / eb) / math.log(nb / na))
    return orders
