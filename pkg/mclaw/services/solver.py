# mclaw/services/solver.py
"""
Monotone finite-volume solver for the integral balance

    d/dt int_K u dV + int_dK <f(u), n> dS = eps * int_dK <grad u, n> dS

on a periodic cell complex with a time-dependent metric.

Forward Euler in time. The compression term is not a source: it is
carried by the cell volumes, u_K(t+dt) V_K(t+dt) = u_K(t) V_K(t) - dt * (net face flux).
"""

import logging
import math
from dataclasses import replace
from typing import Callable, Iterable, Protocol, Sequence

import numpy as np

from mclaw.errors import SolverAbort
from mclaw.models.flux import FluxField
from mclaw.models.geometry import MetricField
from mclaw.models.grid import CellComplex, GeometrySnapshot
from mclaw.models.state import State, StepRecord, Trajectory
from mclaw.schemas.config import SchemeConfig
from mclaw.services.geometry import compression_rate
from mclaw.services.grid import (
    cell_average,
    cell_divergence,
    diffusive_face_flux,
    face_transmissibility,
    snapshot,
)

logger = logging.getLogger(__name__)

LLF_SAMPLES = 17
EO_NODES = 65
MOTION_CAP = 0.1  # max |d_t log V_K| * dt


class Observer(Protocol):
    """Hook called by run(); both methods are optional in practice."""

    def on_step(self, record: StepRecord) -> None: ...

    def on_output(self, state: State, snap: GeometrySnapshot) -> None: ...


# ============================================
# 1. Face flux functions
# ============================================
def _normal_values(fn, cells: CellComplex, snap: GeometrySnapshot, u: np.ndarray) -> np.ndarray:
    """<fn(x_face, t, u), n>_g = n_i fn^i for u of shape (F,) or (F, S)."""
    r = cells.face_midpoints if u.ndim == 1 else cells.face_midpoints[:, None, :]
    return np.einsum("f...i,fi->f...", fn(r, snap.t, u), snap.face_normals)


def face_values(f: FluxField, cells: CellComplex, snap: GeometrySnapshot, u: np.ndarray) -> np.ndarray:
    """h(u) = <f(x_face, t, u), n>_g."""
    return _normal_values(f.components, cells, snap, np.asarray(u, dtype=float))


def face_speeds(f: FluxField, cells: CellComplex, snap: GeometrySnapshot, u: np.ndarray) -> np.ndarray:
    """h'(u) = <d_u f(x_face, t, u), n>_g."""
    return _normal_values(f.du_components, cells, snap, np.asarray(u, dtype=float))


def _range_nodes(f: FluxField, uL: np.ndarray, uR: np.ndarray, samples: int) -> np.ndarray:
    """
    Per face: samples evenly spaced values of [min(uL, uR), max(uL, uR)],
    endpoints exact, followed by the flux breakpoints clipped into the range.
    """
    lo, hi = np.minimum(uL, uR), np.maximum(uL, uR)
    nodes = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, samples)[None, :]
    nodes[:, -1] = hi
    if f.u_breakpoints:
        fixed = np.clip(np.asarray(f.u_breakpoints, dtype=float)[None, :], lo[:, None], hi[:, None])
        nodes = np.concatenate([nodes, fixed], axis=1)
    return nodes


def max_wave_speed(
    f: FluxField,
    cells: CellComplex,
    snap: GeometrySnapshot,
    uL: np.ndarray,
    uR: np.ndarray,
    samples: int = LLF_SAMPLES,
) -> np.ndarray:
    """
    max |h'| over [min(uL, uR), max(uL, uR)] per face.

    With f = Y(x, t) phi(u), |h'| is monotone between breakpoints of phi',
    so the maximum over the sampled nodes is the maximum over the range.
    """
    nodes = _range_nodes(f, np.asarray(uL, dtype=float), np.asarray(uR, dtype=float), samples)
    return np.abs(face_speeds(f, cells, snap, nodes)).max(axis=1)


def _llf_speed_bound(
    f: FluxField,
    cells: CellComplex,
    snap: GeometrySnapshot,
    uL: np.ndarray,
    uR: np.ndarray,
    samples: int = LLF_SAMPLES,
) -> np.ndarray:
    """
    Bound on |dF/du| of the local Lax-Friedrichs flux: alpha plus
    1/2 |uR - uL| times the steepest slope of |h'| between samples.
    """
    nodes = _range_nodes(f, uL, uR, samples)
    speeds = np.abs(face_speeds(f, cells, snap, nodes))
    slope_term = 0.5 * (samples - 1) * np.abs(np.diff(speeds[:, :samples], axis=1)).max(axis=1)
    return speeds.max(axis=1) + slope_term


def _abs_integral(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """int_0^1 |(1-s) a + s b| ds, exact for the linear interpolant."""
    A, B = np.abs(a), np.abs(b)
    same = a * b >= 0
    crossing = np.divide(A**2 + B**2, 2 * (A + B), out=np.zeros_like(A), where=~same)
    return np.where(same, 0.5 * (A + B), crossing)


def normal_flux(
    f: FluxField,
    cells: CellComplex,
    snap: GeometrySnapshot,
    uL: np.ndarray,
    uR: np.ndarray,
    kind: str = "engquist_osher",
) -> np.ndarray:
    """
    Monotone two-point flux for h(u) = <f(x_face, t, u), n>_g at every face.

    engquist_osher: 1/2 (h(uL) + h(uR)) - 1/2 int_{uL}^{uR} |h'|, the integral
        taken exactly over the piecewise-linear interpolant of h' on 65 nodes.
    local_lax_friedrichs: 1/2 (h(uL) + h(uR)) - 1/2 alpha (uR - uL), alpha the
        largest |h'| on 17 samples of [min, max] and the breakpoints inside.
    """
    uL = np.asarray(uL, dtype=float)
    uR = np.asarray(uR, dtype=float)
    ends = face_values(f, cells, snap, np.stack([uL, uR], axis=1))
    central = 0.5 * (ends[:, 0] + ends[:, 1])

    if kind == "local_lax_friedrichs":
        alpha = max_wave_speed(f, cells, snap, uL, uR, LLF_SAMPLES)
        return central - 0.5 * alpha * (uR - uL)
    if kind != "engquist_osher":
        raise ValueError(f"unknown numerical flux {kind!r}")

    du = uR - uL
    nodes = uL[:, None] + du[:, None] * np.linspace(0.0, 1.0, EO_NODES)[None, :]
    nodes[:, -1] = uR
    speeds = face_speeds(f, cells, snap, nodes)
    pieces = _abs_integral(speeds[:, :-1], speeds[:, 1:])
    integral = pieces.sum(axis=1) * (du / (EO_NODES - 1))
    return central - 0.5 * integral


def two_point_flux(
    f: FluxField,
    cells: CellComplex,
    snap: GeometrySnapshot,
    uL: np.ndarray,
    uR: np.ndarray,
    scheme: SchemeConfig,
) -> np.ndarray:
    """Total face flux (advective minus the across-face viscous part) as a function of the two face states."""
    total = normal_flux(f, cells, snap, uL, uR, scheme.numerical_flux) * snap.face_flux_measures
    if scheme.epsilon > 0:
        faces = np.arange(cells.n_faces)
        across = snap.face_diffusion[faces, cells.face_axis]
        total = total - scheme.epsilon * across * (np.asarray(uR) - np.asarray(uL)) / cells.h
    return total


def face_fluxes(
    u: np.ndarray,
    scheme: SchemeConfig,
    cells: CellComplex,
    flux: FluxField,
    snap: GeometrySnapshot,
) -> np.ndarray:
    """Net flux through every face, oriented left -> right, at the snapshot time."""
    uL, uR = u[cells.face_left], u[cells.face_right]
    total = normal_flux(flux, cells, snap, uL, uR, scheme.numerical_flux) * snap.face_flux_measures
    if scheme.epsilon > 0:
        total = total - scheme.epsilon * diffusive_face_flux(cells, snap, u)
    return total


# ============================================
# 2. Time step
# ============================================
def cfl_dt(
    s: State,
    scheme: SchemeConfig,
    cells: CellComplex,
    metric: MetricField,
    flux: FluxField,
    snap: GeometrySnapshot | None = None,
) -> float:
    """
    dt = cfl * min_K V_K / (sum_faces measure * a_face + eps * sum_faces transmissibility),
    further capped by max |d_t log V_K| * dt <= 0.1.

    a_face is max|h'| over the face's range for Engquist-Osher and the
    bound on |dF/du| for local Lax-Friedrichs. For cfl <= 1 the update is
    nondecreasing in every input cell value.

    Raises:
        SolverAbort: dt < 1e-12 * t_end
    """
    snap = snap or snapshot(cells, metric, s.t)
    uL, uR = s.u[cells.face_left], s.u[cells.face_right]
    if scheme.numerical_flux == "local_lax_friedrichs":
        speed = _llf_speed_bound(flux, cells, snap, uL, uR)
    else:
        speed = max_wave_speed(flux, cells, snap, uL, uR)
    weight = speed * snap.face_flux_measures
    if scheme.epsilon > 0:
        weight = weight + scheme.epsilon * face_transmissibility(cells, snap)

    denom = np.zeros(cells.n_cells)
    for a in range(cells.dim):
        denom += weight[cells.upper_faces(a)] + weight[cells.lower_faces[a]]

    positive = denom > 0
    dt = math.inf
    if np.any(positive):
        dt = scheme.cfl * float(np.min(snap.cell_volumes[positive] / denom[positive]))

    if not metric.static:
        lam, _ = compression_rate(metric, cells.cell_centers, s.t)
        rate = float(np.abs(lam).max())
        if rate > 0:
            dt = min(dt, MOTION_CAP / rate)

    if dt < 1e-12 * scheme.t_end:
        raise SolverAbort(f"time step underflow dt={dt:.3e}, degenerate geometry?", s.step)
    return dt


def _snapshot_at(cells: CellComplex, metric: MetricField, snap: GeometrySnapshot, t: float) -> GeometrySnapshot:
    """Geometry at time t; a static metric reuses the measures of snap."""
    if metric.static:
        return replace(snap, t=float(t))
    return snapshot(cells, metric, t)


def _advance(
    s: State,
    t_next: float,
    scheme: SchemeConfig,
    cells: CellComplex,
    flux: FluxField,
    snap0: GeometrySnapshot,
    snap1: GeometrySnapshot,
) -> State:
    dt = t_next - s.t
    div = cell_divergence(cells, face_fluxes(s.u, scheme, cells, flux, snap0))
    V0, V1 = snap0.cell_volumes, snap1.cell_volumes
    ratio = 1.0 if V0 is V1 else V0 / V1
    u = s.u * ratio - (dt / V1) * div
    if not np.all(np.isfinite(u)):
        bad = int(np.argmax(~np.isfinite(u)))
        raise SolverAbort(f"non-finite value in cell {bad} at t={t_next:.6g}", s.step + 1)
    return State(u=u, t=float(t_next), mass=math.fsum(u * V1), step=s.step + 1)


def step(
    s: State,
    scheme: SchemeConfig,
    cells: CellComplex,
    metric: MetricField,
    flux: FluxField,
    dt: float | None = None,
) -> State:
    """One forward Euler step of the integral balance; dt from cfl_dt when omitted."""
    snap0 = snapshot(cells, metric, s.t)
    if dt is None:
        dt = cfl_dt(s, scheme, cells, metric, flux, snap0)
    snap1 = _snapshot_at(cells, metric, snap0, s.t + dt)
    return _advance(s, s.t + dt, scheme, cells, flux, snap0, snap1)


# ============================================
# 3. Time integration
# ============================================
def initial_state(
    u0: Callable[[np.ndarray], np.ndarray] | np.ndarray,
    cells: CellComplex,
    metric: MetricField,
    snap: GeometrySnapshot,
) -> State:
    """Cell-average a callable r -> u0(r) with dV, or take an array of averages as is."""
    if callable(u0):
        u = cell_average(cells, metric, snap.t, u0)
    else:
        u = np.array(u0, dtype=float)
        if u.shape != (cells.n_cells,):
            raise ValueError(f"initial data has shape {u.shape}, grid has {cells.n_cells} cells")
    return State(u=u, t=snap.t, mass=math.fsum(u * snap.cell_volumes), step=0)


def run(
    u0,
    scheme: SchemeConfig,
    cells: CellComplex,
    metric: MetricField,
    flux: FluxField,
    observers: Iterable[Observer] = (),
    keep_steps: bool = False,
) -> Trajectory:
    """
    Integrate from t = 0 to scheme.t_end.

    The trajectory holds the initial state followed by the states at
    every output time. Observers see every step and every output.

    Raises:
        SolverAbort: non-finite state, dt underflow or max_steps exhausted
    """
    observers = list(observers)
    snap = snapshot(cells, metric, 0.0)
    state = initial_state(u0, cells, metric, snap)
    initial_mass = state.mass

    states, snaps, records = [state], [snap], []
    for obs in observers:
        _notify(obs, "on_output", state, snap)

    n_steps, dt_min, dt_max = 0, math.inf, 0.0
    tol = 1e-12 * scheme.t_end
    for target in scheme.times():
        if target <= tol:
            continue
        while state.t < target:
            if n_steps >= scheme.max_steps:
                raise SolverAbort(
                    f"max_steps={scheme.max_steps} reached at t={state.t:.6g}", state.step
                )
            dt = cfl_dt(state, scheme, cells, metric, flux, snap)
            t_next = target if state.t + dt >= target - tol else state.t + dt
            next_snap = _snapshot_at(cells, metric, snap, t_next)
            new_state = _advance(state, t_next, scheme, cells, flux, snap, next_snap)

            record = StepRecord(state, new_state, snap, next_snap)
            for obs in observers:
                _notify(obs, "on_step", record)
            if keep_steps:
                records.append(record)

            dt_taken = t_next - state.t
            dt_min, dt_max = min(dt_min, dt_taken), max(dt_max, dt_taken)
            state, snap = new_state, next_snap
            n_steps += 1

        states.append(state)
        snaps.append(snap)
        for obs in observers:
            _notify(obs, "on_output", state, snap)
        logger.debug("output t=%s after %s steps", state.t, n_steps)

    logger.debug("run finished: %s steps, dt in [%s, %s]", n_steps, dt_min, dt_max)
    return Trajectory(
        states=tuple(states),
        snapshots=tuple(snaps),
        steps=tuple(records),
        n_steps=n_steps,
        dt_max=dt_max,
        dt_min=dt_min if n_steps else 0.0,
        initial_mass=initial_mass,
        masses=tuple(s.mass for s in states),
    )


def run_ensemble(
    initials: Sequence,
    scheme: SchemeConfig,
    cells: CellComplex,
    metric: MetricField,
    flux: FluxField,
) -> list[Trajectory]:
    """
    Integrate several initial data with one shared sequence of time steps
    (the smallest CFL step of the members), keeping every step.

    Paired-run checks compare members cell by cell at every step.
    """
    snap = snapshot(cells, metric, 0.0)
    states = [initial_state(u0, cells, metric, snap) for u0 in initials]
    records: list[list[StepRecord]] = [[] for _ in states]
    outputs = [[s] for s in states]
    out_snaps = [snap]

    n_steps, dt_min, dt_max = 0, math.inf, 0.0
    tol = 1e-12 * scheme.t_end
    for target in scheme.times():
        if target <= tol:
            continue
        while states[0].t < target:
            if n_steps >= scheme.max_steps:
                raise SolverAbort(f"max_steps={scheme.max_steps} reached at t={states[0].t:.6g}", n_steps)
            dt = min(cfl_dt(s, scheme, cells, metric, flux, snap) for s in states)
            t = states[0].t
            t_next = target if t + dt >= target - tol else t + dt
            next_snap = _snapshot_at(cells, metric, snap, t_next)
            advanced = [_advance(s, t_next, scheme, cells, flux, snap, next_snap) for s in states]
            for i, (old, new) in enumerate(zip(states, advanced)):
                records[i].append(StepRecord(old, new, snap, next_snap))
            dt_min, dt_max = min(dt_min, t_next - t), max(dt_max, t_next - t)
            states, snap = advanced, next_snap
            n_steps += 1
        for i, s in enumerate(states):
            outputs[i].append(s)
        out_snaps.append(snap)

    return [
        Trajectory(
            states=tuple(outputs[i]),
            snapshots=tuple(out_snaps),
            steps=tuple(records[i]),
            n_steps=n_steps,
            dt_max=dt_max,
            dt_min=dt_min if n_steps else 0.0,
            initial_mass=outputs[i][0].mass,
            masses=tuple(s.mass for s in outputs[i]),
        )
        for i in range(len(states))
    ]


def _notify(obs, method: str, *args) -> None:
    hook = getattr(obs, method, None)
    if hook is not None:
        hook(*args)
