# test_solver.py
"""Test numerical fluxes, the time step and the finite-volume update."""

import math

import numpy as np
import pytest

from mclaw.errors import SolverAbort
from mclaw.schemas.config import SchemeConfig
from mclaw.services import grid
from mclaw.services.analysis import l1_distance
from mclaw.services.families import initial_data, killing_rotation
from mclaw.services.solver import (
    cfl_dt,
    initial_state,
    normal_flux,
    run,
    run_ensemble,
    step,
)


def _faces(cells, value):
    return np.full(cells.n_faces, float(value))


# ============================================
# 1. Numerical fluxes
# ============================================
def test_engquist_osher_examples(flat_circle, burgers_1d):
    """Burgers, unit normal: EO(1, -1) = 1 and EO(-1, 1) = 0."""
    cells = grid.build(1, 4)
    snap = grid.snapshot(cells, flat_circle, 0.0)
    flux = normal_flux(burgers_1d, cells, snap, _faces(cells, 1), _faces(cells, -1))
    assert np.allclose(flux, 1.0, atol=1e-14)
    flux = normal_flux(burgers_1d, cells, snap, _faces(cells, -1), _faces(cells, 1))
    assert np.allclose(flux, 0.0, atol=1e-14)
    print("✓ Engquist-Osher examples")


def test_local_lax_friedrichs_examples(flat_circle, burgers_1d):
    cells = grid.build(1, 4)
    snap = grid.snapshot(cells, flat_circle, 0.0)
    kind = "local_lax_friedrichs"
    assert np.allclose(normal_flux(burgers_1d, cells, snap, _faces(cells, 1), _faces(cells, -1), kind), 1.5)
    assert np.allclose(normal_flux(burgers_1d, cells, snap, _faces(cells, -1), _faces(cells, 1), kind), -0.5)


@pytest.mark.parametrize("kind", ["engquist_osher", "local_lax_friedrichs"])
def test_flux_consistency(flat_circle, burgers_1d, kind):
    """F(u, u) = h(u)."""
    cells = grid.build(1, 4)
    snap = grid.snapshot(cells, flat_circle, 0.0)
    u = np.array([-2.0, -0.3, 0.0, 1.7])
    assert np.allclose(normal_flux(burgers_1d, cells, snap, u, u, kind), 0.5 * u**2, atol=1e-14)


def test_unknown_flux_kind(flat_circle, burgers_1d):
    cells = grid.build(1, 4)
    snap = grid.snapshot(cells, flat_circle, 0.0)
    with pytest.raises(ValueError):
        normal_flux(burgers_1d, cells, snap, _faces(cells, 0), _faces(cells, 0), "roe")


# ============================================
# 2. Time step
# ============================================
def test_cfl_example(flat_circle, burgers_1d):
    """Flat circle, n = 100, u = 1, cfl = 0.5: both faces count, dt = 2.5e-3."""
    cells = grid.build(1, 100)
    snap = grid.snapshot(cells, flat_circle, 0.0)
    state = initial_state(np.ones(100), cells, flat_circle, snap)
    dt = cfl_dt(state, SchemeConfig(cfl=0.5), cells, flat_circle, burgers_1d, snap)
    assert dt == pytest.approx(2.5e-3, rel=1e-12)
    print(f"✓ CFL time step {dt}")


def test_cfl_without_waves_is_unbounded(flat_circle, zero_flux_1d, circle_64):
    snap = grid.snapshot(circle_64, flat_circle, 0.0)
    state = initial_state(np.ones(64), circle_64, flat_circle, snap)
    assert cfl_dt(state, SchemeConfig(), circle_64, flat_circle, zero_flux_1d, snap) == math.inf


def test_cfl_motion_cap(growing_circle, zero_flux_1d):
    """lambda = 1 at t = 0 caps dt at 0.1."""
    cells = grid.build(1, 16)
    snap = grid.snapshot(cells, growing_circle, 0.0)
    state = initial_state(np.ones(16), cells, growing_circle, snap)
    assert cfl_dt(state, SchemeConfig(), cells, growing_circle, zero_flux_1d) == pytest.approx(0.1)


def test_viscosity_halves_the_time_step(flat_circle, burgers_1d):
    """n = 100, u = 1: eps = 0.01 matches the advective sum and halves dt to 1.25e-3."""
    cells = grid.build(1, 100)
    snap = grid.snapshot(cells, flat_circle, 0.0)
    state = initial_state(np.ones(100), cells, flat_circle, snap)
    dt = cfl_dt(state, SchemeConfig(cfl=0.5, epsilon=0.01), cells, flat_circle, burgers_1d, snap)
    assert dt == pytest.approx(1.25e-3, rel=1e-12)


# ============================================
# 3. Single steps
# ============================================
def test_zero_flux_static_step_is_identity(flat_circle, zero_flux_1d, circle_64):
    u0 = initial_data("sin(2*pi*r1)", 1)
    snap = grid.snapshot(circle_64, flat_circle, 0.0)
    s0 = initial_state(u0, circle_64, flat_circle, snap)
    s1 = step(s0, SchemeConfig(), circle_64, flat_circle, zero_flux_1d, dt=0.01)
    assert np.array_equal(s1.u, s0.u)
    assert s1.t == pytest.approx(0.01) and s1.step == 1


def test_expanding_circle_step_dilutes(growing_circle, zero_flux_1d):
    """f = 0 on a circle of radius 1 + t: one step scales u by 1 / (1 + dt)."""
    cells = grid.build(1, 32)
    snap = grid.snapshot(cells, growing_circle, 0.0)
    s0 = initial_state(np.linspace(-1.0, 1.0, 32), cells, growing_circle, snap)
    dt = 0.05
    s1 = step(s0, SchemeConfig(), cells, growing_circle, zero_flux_1d, dt=dt)
    assert np.allclose(s1.u, s0.u / (1 + dt), rtol=1e-12, atol=1e-15)
    assert s1.mass == pytest.approx(s0.mass, abs=1e-13)
    print("✓ compression carried by the volumes")


def test_constant_state_under_killing_flux(donut):
    """The azimuthal rotation of a torus of revolution keeps u = const."""
    cells = grid.build(2, 8)
    flux = killing_rotation(1.0, dim=2)
    snap = grid.snapshot(cells, donut, 0.0)
    s0 = initial_state(np.full(cells.n_cells, 0.7), cells, donut, snap)
    s1 = step(s0, SchemeConfig(), cells, donut, flux)
    assert np.allclose(s1.u, 0.7, atol=1e-12)


def test_non_finite_state_aborts(flat_circle, burgers_1d):
    cells = grid.build(1, 8)
    snap = grid.snapshot(cells, flat_circle, 0.0)
    u = np.zeros(8)
    u[3] = np.nan
    s0 = initial_state(u, cells, flat_circle, snap)
    with pytest.raises(SolverAbort, match="non-finite"):
        step(s0, SchemeConfig(), cells, flat_circle, burgers_1d, dt=1e-3)


def test_initial_state_shape_mismatch(flat_circle, circle_64):
    snap = grid.snapshot(circle_64, flat_circle, 0.0)
    with pytest.raises(ValueError):
        initial_state(np.zeros(10), circle_64, flat_circle, snap)


@pytest.mark.parametrize("kind", ["engquist_osher", "local_lax_friedrichs"])
@pytest.mark.parametrize("cfl", [0.45, 0.9])
@pytest.mark.parametrize("metric_name", ["wavy", "growing_circle"])
def test_update_is_monotone(request, burgers_1d, metric_name, cfl, kind):
    """Raising any one input cell value never lowers an output cell value."""
    metric = request.getfixturevalue(metric_name)
    cells = grid.build(1, 16)
    scheme = SchemeConfig(numerical_flux=kind, cfl=cfl)
    snap = grid.snapshot(cells, metric, 0.0)
    rng = np.random.default_rng(11)
    delta = 1e-7

    worst = math.inf
    for _ in range(4):
        base = initial_state(rng.uniform(-1.0, 1.0, 16), cells, metric, snap)
        dt = cfl_dt(base, scheme, cells, metric, burgers_1d, snap)
        out = step(base, scheme, cells, metric, burgers_1d, dt=dt).u
        for j in range(16):
            u = base.u.copy()
            u[j] += delta
            bumped = step(initial_state(u, cells, metric, snap), scheme, cells, metric, burgers_1d, dt=dt).u
            worst = min(worst, float(((bumped - out) / delta).min()))
    assert worst >= -1e-6
    print(f"✓ {kind} at cfl {cfl} on {metric_name}: smallest difference quotient {worst:.3e}")


# ============================================
# 4. Runs
# ============================================
class _Counter:
    def __init__(self):
        self.steps = 0
        self.outputs = []

    def on_step(self, record):
        self.steps += 1

    def on_output(self, state, snap):
        self.outputs.append(state.t)


def test_run_hits_output_times(flat_circle, burgers_1d, circle_64):
    """Outputs land exactly on the requested times; mass is conserved."""
    scheme = SchemeConfig(t_end=0.1, output_times=[0.05])
    counter = _Counter()
    traj = run(initial_data("sin(2*pi*r1)", 1), scheme, circle_64, flat_circle, burgers_1d, [counter], keep_steps=True)

    assert list(traj.times) == [0.0, 0.05, 0.1]
    assert counter.outputs == [0.0, 0.05, 0.1]
    assert counter.steps == traj.n_steps == len(traj.steps)
    assert 0 < traj.dt_min <= traj.dt_max
    assert max(abs(m - traj.initial_mass) for m in traj.masses) < 1e-12
    print(f"✓ run: {traj.n_steps} steps, dt in [{traj.dt_min:.3e}, {traj.dt_max:.3e}]")


def test_run_max_steps(flat_circle, burgers_1d, circle_64):
    scheme = SchemeConfig(t_end=0.1, max_steps=1)
    with pytest.raises(SolverAbort, match="max_steps"):
        run(initial_data("sin(2*pi*r1)", 1), scheme, circle_64, flat_circle, burgers_1d)


def test_viscous_run_conserves_and_damps(flat_circle, zero_flux_1d, circle_64):
    scheme = SchemeConfig(t_end=0.05, epsilon=0.01)
    traj = run(initial_data("sin(2*pi*r1)", 1), scheme, circle_64, flat_circle, zero_flux_1d)
    assert np.abs(traj.final.u).max() < np.abs(traj.states[0].u).max()
    assert traj.final.mass == pytest.approx(traj.initial_mass, abs=1e-13)


def test_ensemble_shares_steps(flat_circle, burgers_1d, circle_64):
    """Members advance with the same time steps; the largest datum sets dt."""
    u0 = initial_data("sin(2*pi*r1)", 1)
    scheme = SchemeConfig(t_end=0.05)
    small, large = run_ensemble([u0, lambda r: 2 * u0(r)], scheme, circle_64, flat_circle, burgers_1d)

    assert small.n_steps == large.n_steps == len(small.steps) == len(large.steps)
    for a, b in zip(small.steps, large.steps):
        assert a.dt == b.dt
    alone = run(lambda r: 2 * u0(r), scheme, circle_64, flat_circle, burgers_1d)
    assert np.allclose(alone.final.u, large.final.u, atol=1e-14)


def test_static_metric_snapshots_carry_their_times(wavy, zero_flux_1d):
    """Outputs on a static metric can be compared at t_end."""
    cells = grid.build(1, 32)
    scheme = SchemeConfig(t_end=0.1, epsilon=0.01, output_times=[0.05])
    a, b = run_ensemble([np.zeros(32), np.linspace(0.0, 1.0, 32)], scheme, cells, wavy, zero_flux_1d)
    assert [snap.t for snap in a.snapshots] == [0.0, 0.05, 0.1]
    assert all(rec.snapshot_after.t == rec.after.t for rec in a.steps)
    # b stays positive, so its distance to zero is its conserved mass
    start = l1_distance(a.states[0], b.states[0], a.snapshots[0])
    assert l1_distance(a.final, b.final, a.snapshots[-1]) == pytest.approx(start, rel=1e-12)


def test_heat_flow_decreases_l2(wavy, zero_flux_1d):
    """Pure diffusion on a static metric: sum u^2 V never grows from step to step."""
    cells = grid.build(1, 32)
    scheme = SchemeConfig(t_end=0.25, epsilon=0.02)
    traj = run(initial_data("sin(2*pi*r1) + 0.5*cos(6*pi*r1)", 1), scheme, cells, wavy, zero_flux_1d, keep_steps=True)

    l2 = [math.fsum(traj.steps[0].before.u**2 * traj.steps[0].snapshot_before.cell_volumes)]
    l2.extend(math.fsum(rec.after.u**2 * rec.snapshot_after.cell_volumes) for rec in traj.steps)
    assert len(l2) > 10
    assert all(b <= a * (1 + 1e-14) for a, b in zip(l2, l2[1:]))
    assert l2[-1] < 0.9 * l2[0]


def test_comparison_over_a_thousand_steps(flat_circle, burgers_1d, circle_64):
    """Ordered data stay ordered at every step of a long run through shock formation."""
    snap = grid.snapshot(circle_64, flat_circle, 0.0)
    base = initial_state(initial_data("2 + sin(2*pi*r1)", 1), circle_64, flat_circle, snap).u
    bump = np.random.default_rng(5).uniform(0.0, 0.1, circle_64.n_cells)
    low, high = run_ensemble([base, base + bump], SchemeConfig(t_end=2.0), circle_64, flat_circle, burgers_1d)

    assert low.n_steps >= 1000
    gap = max(float((a.after.u - b.after.u).max()) for a, b in zip(low.steps, high.steps))
    assert gap <= 1e-12
    print(f"✓ comparison over {low.n_steps} steps, largest u - v = {gap:.3e}")


if __name__ == "__main__":
    from mclaw.services.families import burgers, flat

    test_engquist_osher_examples(flat(1), burgers(1))
    test_cfl_example(flat(1), burgers(1))
    print("\n✓ All tests passed!")
