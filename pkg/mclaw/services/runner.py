# mclaw/services/runner.py
"""
Scenario runner.

run_scenario() solves one RunConfig, measures the trajectory, compares
it against the envelopes and evaluates every requested check. The
studies at the bottom (convergence, vanishing viscosity, check-all)
are built from the same pieces.

Used by:
- mclaw run / converge / check-all commands
- root-level end-to-end tests
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from mclaw.config import get_settings
from mclaw.errors import MclawError, UsageError
from mclaw.models.flux import FluxField
from mclaw.models.geometry import MetricField
from mclaw.models.grid import CellComplex
from mclaw.models.state import Trajectory
from mclaw.schemas.config import RunConfig
from mclaw.schemas.report import (
    BoundsReport,
    CheckResult,
    ConvergenceReport,
    ConvergenceRow,
    SuiteEntry,
    ViscosityReport,
)
from mclaw.services import grid
from mclaw.services.analysis import (
    EntropyObserver,
    Envelopes,
    compute_envelopes,
    discrete_tv,
    eoc_table,
    kruzkov_constants,
    l1_distance,
    lipschitz_check,
)
from mclaw.services.families import initial_data, make_flux, make_metric
from mclaw.services.flux import killing_defect_field, sample_points, u_samples
from mclaw.services.geometry import compression_rate
from mclaw.services.oracle import oracle_cell_averages
from mclaw.services.output import write_convergence, write_run
from mclaw.services.solver import initial_state, run, run_ensemble

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES = {
    "mass": 1e-12,  # relative to ||u0||_L1
    "linf": 1e-10,
    "tv_envelope": 1e-10,
    "tv_diminishing": 1e-12,  # 1e-8 in two dimensions
    "tv_growth": 1e-12,
    "entropy": 10.0,  # C in C * (dr + dt) when the geometry is not compatible
    "entropy_refinement": 2.0,  # max/min of C at n and 2n
    "comparison": 1e-12,
    "l1_contraction": 1e-12,
    "lipschitz": 0.1,  # relative slack on c6 + c7 * tv_max
    "oracle_l1": 1e-2,
    "max_principle": 1e-12,
    "killing": 1e-8,
}
ENTROPY_SIGN_TOL = 1e-10
PERTURBATION = 0.1  # size of the paired-run perturbation relative to ||u0||_inf

CONVERGENCE_RESOLUTIONS = (64, 128, 256)
VISCOSITY_EPSILONS = (0.04, 0.02, 0.01, 0.005)
VISCOSITY_N = 512
VISCOSITY_MAX_RATIO = 0.65


# ============================================
# 1. Problem assembly
# ============================================
@dataclass(frozen=True)
class Problem:
    """Everything a run needs, built from a RunConfig."""

    config: RunConfig
    cells: CellComplex
    metric: MetricField
    flux: FluxField
    u0: Callable[[np.ndarray], np.ndarray]


def build_problem(cfg: RunConfig) -> Problem:
    dim = cfg.geometry.dim
    return Problem(
        config=cfg,
        cells=grid.build(dim, cfg.grid.n, cfg.grid.quadrature_order),
        metric=make_metric(cfg.geometry.metric, cfg.geometry.params, dim),
        flux=make_flux(cfg.flux.family, cfg.flux.params, dim, cfg.flux.profile),
        u0=initial_data(cfg.initial.u0, dim),
    )


@dataclass(frozen=True)
class RunOutcome:
    report: BoundsReport
    trajectory: Trajectory
    paths: tuple[Path, ...] = ()

    @property
    def exit_code(self) -> int:
        return 0 if self.report.passed else 1


# ============================================
# 2. Checks
# ============================================
@dataclass
class _Measurements:
    """What the checks look at; filled by run_scenario."""

    problem: Problem
    trajectory: Trajectory
    envelopes: Envelopes
    times: np.ndarray
    linf: np.ndarray
    tv: np.ndarray
    envelope_linf: np.ndarray
    envelope_tv: np.ndarray
    u0_linf: float
    u0_l1: float
    tv0: float
    compatible: bool
    entropy: EntropyObserver | None = None
    ordered: tuple[Trajectory, Trajectory] | None = None
    unordered: tuple[Trajectory, Trajectory] | None = None

    def tol(self, name: str) -> float:
        tolerances = self.problem.config.checks.tolerances
        if name in tolerances:
            return tolerances[name]
        if name == "tv_diminishing" and self.problem.cells.dim == 2:
            return 1e-8
        return DEFAULT_TOLERANCES[name]


def _result(name: str, passed: bool, measured: float, bound: float, tolerance: float, detail: str = ""):
    return CheckResult(
        name=name,
        passed=bool(passed),
        measured=float(measured),
        bound=float(bound),
        tolerance=float(tolerance),
        detail=detail,
    )


def _step_states(trajectory: Trajectory):
    """(state, snapshot) at every stored step, or at the outputs when steps were not kept."""
    if not trajectory.steps:
        return list(zip(trajectory.states, trajectory.snapshots))
    first = trajectory.steps[0]
    pairs = [(first.before, first.snapshot_before)]
    pairs.extend((rec.after, rec.snapshot_after) for rec in trajectory.steps)
    return pairs


def _check_mass(m: _Measurements) -> CheckResult:
    masses = np.asarray(m.trajectory.masses)
    drift = float(np.abs(masses - m.trajectory.initial_mass).max()) / max(m.u0_l1, 1e-300)
    tol = m.tol("mass")
    return _result("mass", drift <= tol, drift, 0.0, tol, "relative to ||u0||_L1")


def _check_linf(m: _Measurements) -> CheckResult:
    excess = m.linf - m.envelope_linf
    i = int(np.argmax(excess))
    tol = m.tol("linf") * max(1.0, m.u0_linf)
    detail = f"worst at t={m.times[i]:.6g}: ||u||_inf={m.linf[i]:.6g}, envelope={m.envelope_linf[i]:.6g}"
    return _result("linf", excess[i] <= tol, m.linf[i], m.envelope_linf[i], tol, detail)


def _check_tv_envelope(m: _Measurements) -> CheckResult:
    excess = m.tv - m.envelope_tv
    i = int(np.argmax(excess))
    tol = m.tol("tv_envelope") * max(1.0, m.tv0)
    detail = f"worst at t={m.times[i]:.6g}"
    return _result("tv_envelope", excess[i] <= tol, m.tv[i], m.envelope_tv[i], tol, detail)


def _check_tv_diminishing(m: _Measurements) -> CheckResult:
    cells = m.problem.cells
    tv = [discrete_tv(s, snap, cells) for s, snap in _step_states(m.trajectory)]
    increase = max((b - a for a, b in zip(tv, tv[1:])), default=0.0)
    tol = m.tol("tv_diminishing") * max(1.0, m.tv0)
    return _result("tv_diminishing", increase <= tol, increase, 0.0, tol, "largest increase between steps")


def _check_tv_growth(m: _Measurements) -> CheckResult:
    growth = float(m.tv.max()) - m.tv0
    tol = m.tol("tv_growth")
    return _result("tv_growth", growth > tol, growth, 0.0, tol, "passes when TV grows above TV(0)")


def _check_entropy(m: _Measurements) -> CheckResult:
    obs = m.entropy
    if m.compatible:
        detail = f"sign test over {len(obs.ks)} Kruzkov constants"
        return _result("entropy", obs.overall <= ENTROPY_SIGN_TOL, obs.overall, 0.0, ENTROPY_SIGN_TOL, detail)
    C = m.tol("entropy")
    bound = C * (m.problem.cells.h + obs.dt_max)
    detail = f"C * (dr + dt) with C={C:.6g}; measured C={obs.constant:.6g}"
    return _result("entropy", obs.overall <= bound, obs.overall, bound, C, detail)


def _check_entropy_refinement(m: _Measurements) -> CheckResult:
    p, cfg = m.problem, m.problem.config
    fine = build_problem(cfg.with_resolution(2 * p.cells.n))
    observer = EntropyObserver(fine.cells, fine.metric, fine.flux, cfg.scheme, m.entropy.ks)
    run(fine.u0, cfg.scheme, fine.cells, fine.metric, fine.flux, observers=[observer])
    coarse_c, fine_c = m.entropy.constant, observer.constant
    tol = m.tol("entropy_refinement")
    detail = f"C={coarse_c:.6g} at n={p.cells.n}, C={fine_c:.6g} at n={fine.cells.n}"
    if max(coarse_c, fine_c) <= ENTROPY_SIGN_TOL:
        return _result("entropy_refinement", True, 1.0, tol, tol, detail + "; no positive residual")
    ratio = max(coarse_c, fine_c) / max(min(coarse_c, fine_c), 1e-300)
    return _result("entropy_refinement", ratio <= tol, ratio, tol, tol, detail)


def _check_comparison(m: _Measurements) -> CheckResult:
    low, high = m.ordered
    worst, count = -math.inf, 0
    tol = m.tol("comparison") * max(1.0, m.u0_linf)
    for (a, _), (b, _) in zip(_step_states(low), _step_states(high)):
        gap = a.u - b.u
        worst = max(worst, float(gap.max()))
        count += int(np.sum(gap > tol))
    detail = f"{count} cell-steps with u > v; largest u - v = {worst:.3e}"
    return _result("comparison", count == 0, max(worst, 0.0), 0.0, tol, detail)


def _check_l1_contraction(m: _Measurements) -> CheckResult:
    a, b = m.unordered
    d = [l1_distance(x, y, snap) for (x, snap), (y, _) in zip(_step_states(a), _step_states(b))]
    increase = max((q - p for p, q in zip(d, d[1:])), default=0.0)
    tol = m.tol("l1_contraction") * max(1.0, d[0])
    detail = f"||u - v||_L1 from {d[0]:.6g} to {d[-1]:.6g}"
    return _result("l1_contraction", increase <= tol, increase, 0.0, tol, detail)


def _check_lipschitz(m: _Measurements) -> CheckResult:
    c6 = float(m.envelopes.series("c6").max())
    c7 = float(m.envelopes.series("c7").max())
    measured, bound = lipschitz_check(m.trajectory, c6, c7, m.envelopes.tv_max)
    tol = m.tol("lipschitz")
    passed = measured <= bound * (1.0 + tol) + 1e-12
    return _result("lipschitz", passed, measured, bound, tol, f"c6={c6:.6g}, c7={c7:.6g}")


def _check_oracle_l1(m: _Measurements) -> CheckResult:
    p, cfg = m.problem, m.problem.config
    final, snap = m.trajectory.final, m.trajectory.snapshots[-1]
    reference = reference_averages(p, [p.cells])[0]
    error = math.fsum(np.abs(final.u - reference) * snap.cell_volumes)
    tol = m.tol("oracle_l1")
    detail = f"reference={cfg.checks.reference} at t={final.t:.6g}"
    return _result("oracle_l1", error <= tol, error, 0.0, tol, detail)


def _check_max_principle(m: _Measurements) -> CheckResult:
    u0 = m.trajectory.states[0].u
    lo, hi = float(u0.min()), float(u0.max())
    excess = max(
        max(float(s.u.max()) - hi, lo - float(s.u.min())) for s, _ in _step_states(m.trajectory)
    )
    tol = m.tol("max_principle") * max(1.0, m.u0_linf)
    return _result("max_principle", excess <= tol, max(excess, 0.0), 0.0, tol, f"range of u0 [{lo:.6g}, {hi:.6g}]")


def _check_killing(m: _Measurements) -> CheckResult:
    p = m.problem
    resolution = p.config.checks.sample_resolution or p.cells.n
    P = sample_points(p.cells.dim, resolution)[:, None, :]
    us = u_samples(p.flux, m.envelopes.u_max)
    U = np.broadcast_to(us, (P.shape[0], len(us)))
    defect = max(
        float(killing_defect_field(p.flux, p.metric, P, t, U).max())
        for t in (0.0, p.config.scheme.t_end)
    )
    tol = m.tol("killing")
    return _result("killing", defect <= tol, defect, 0.0, tol, "max |L_{d_u f} g| relative to g")


CHECKS: dict[str, Callable[[_Measurements], CheckResult]] = {
    "mass": _check_mass,
    "linf": _check_linf,
    "tv_envelope": _check_tv_envelope,
    "tv_diminishing": _check_tv_diminishing,
    "tv_growth": _check_tv_growth,
    "entropy": _check_entropy,
    "entropy_refinement": _check_entropy_refinement,
    "comparison": _check_comparison,
    "l1_contraction": _check_l1_contraction,
    "lipschitz": _check_lipschitz,
    "oracle_l1": _check_oracle_l1,
    "max_principle": _check_max_principle,
    "killing": _check_killing,
}


# ============================================
# 3. Single run
# ============================================
def reference_averages(p: Problem, targets: Sequence[CellComplex]) -> list[np.ndarray]:
    """
    Reference cell averages at t_end on each target grid.

    oracle: characteristics solution averaged over each cell.
    fine_grid: one run at 4x the finest target resolution, restricted.

    Raises:
        UsageError: reference = none
    """
    cfg = p.config
    reference = cfg.checks.reference
    t_end = cfg.scheme.t_end
    if reference == "none":
        raise UsageError(f"{cfg.name}: reference = none; set [checks] reference = oracle or fine_grid")
    if reference == "oracle":
        return [
            oracle_cell_averages(p.u0, p.flux, p.metric, cells, t_end, cfg.checks.oracle_steps)
            for cells in targets
        ]

    fine_n = 4 * max(cells.n for cells in targets)
    fine = build_problem(cfg.with_resolution(fine_n))
    logger.info("%s: fine-grid reference at n=%s", cfg.name, fine_n)
    trajectory = run(fine.u0, cfg.scheme, fine.cells, fine.metric, fine.flux)
    volumes = trajectory.snapshots[-1].cell_volumes
    return [grid.restrict(fine.cells, cells, trajectory.final.u, volumes) for cells in targets]


def _perturbations(cells: CellComplex, seed: int, scale: float) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    ordered = scale * rng.uniform(0.05, 1.0, cells.n_cells)
    unordered = scale * rng.uniform(-1.0, 1.0, cells.n_cells)
    return ordered, unordered


def _geometry_compatible(envelopes: Envelopes, metric: MetricField) -> bool:
    """Static metric and a flux with vanishing div^x on the sampled range."""
    return metric.static and float(envelopes.series("c6").max()) <= 1e-12


def run_scenario(cfg: RunConfig, output_dir: str | Path | None = None) -> RunOutcome:
    """
    Solve, measure and check one run configuration.

    Files are written under output_dir/<name>/ when output_dir is given.

    Raises:
        MclawError: configuration, geometry, solver or oracle failures
    """
    p = build_problem(cfg)
    checks = list(dict.fromkeys(cfg.checks.run))
    scheme, cells = cfg.scheme, p.cells
    logger.info("%s: n=%s dim=%s flux=%s checks=%s", cfg.name, cells.n, cells.dim, scheme.numerical_flux, checks)

    snap0 = grid.snapshot(cells, p.metric, 0.0)
    start = initial_state(p.u0, cells, p.metric, snap0)
    u0_linf = float(np.abs(start.u).max())
    tv0 = discrete_tv(start, snap0, cells)

    envelopes = compute_envelopes(
        p.flux,
        p.metric,
        u0_linf,
        tv0,
        scheme.t_end,
        scheme.epsilon,
        resolution=cfg.checks.sample_resolution or cells.n,
        extra_times=scheme.times(),
    )

    observers = []
    entropy = None
    if "entropy" in checks or "entropy_refinement" in checks:
        ks = kruzkov_constants(envelopes.u_max, cfg.checks.kruzkov_constants)
        entropy = EntropyObserver(cells, p.metric, p.flux, scheme, ks)
        observers.append(entropy)

    keep_steps = "tv_diminishing" in checks or "max_principle" in checks
    trajectory = run(p.u0, scheme, cells, p.metric, p.flux, observers=observers, keep_steps=keep_steps)

    ordered = unordered = None
    if "comparison" in checks or "l1_contraction" in checks:
        up, shake = _perturbations(cells, cfg.checks.seed, PERTURBATION * max(u0_linf, 1e-3))
        members = run_ensemble([start.u, start.u + up, start.u + shake], scheme, cells, p.metric, p.flux)
        ordered = (members[0], members[1])
        unordered = (members[0], members[2])

    times = trajectory.times
    env_linf, env_tv = envelopes.at(times)
    m = _Measurements(
        problem=p,
        trajectory=trajectory,
        envelopes=envelopes,
        times=times,
        linf=np.array([float(np.abs(s.u).max()) for s in trajectory.states]),
        tv=np.array([discrete_tv(s, snap, cells) for s, snap in zip(trajectory.states, trajectory.snapshots)]),
        envelope_linf=env_linf,
        envelope_tv=env_tv,
        u0_linf=u0_linf,
        u0_l1=math.fsum(np.abs(start.u) * snap0.cell_volumes),
        tv0=tv0,
        compatible=_geometry_compatible(envelopes, p.metric),
        entropy=entropy,
        ordered=ordered,
        unordered=unordered,
    )

    results = {}
    for name in checks:
        result = results[name] = CHECKS[name](m)
        logger.log(
            logging.INFO if result.passed else logging.WARNING,
            "%s: %s %s (measured %.6g, bound %.6g)",
            cfg.name,
            name,
            "pass" if result.passed else "FAIL",
            result.measured,
            result.bound,
        )

    one_sided = not p.metric.static and any(
        compression_rate(p.metric, cells.cell_centers, t)[1] for t in (0.0, scheme.t_end)
    )

    l1_series = []
    if unordered is not None:
        a, b = unordered
        l1_series = [l1_distance(x, y, snap) for x, y, snap in zip(a.states, b.states, a.snapshots)]

    report = BoundsReport(
        name=cfg.name,
        dim=cells.dim,
        n=cells.n,
        numerical_flux=scheme.numerical_flux,
        epsilon=scheme.epsilon,
        steps=trajectory.n_steps,
        dt_min=trajectory.dt_min,
        dt_max=trajectory.dt_max,
        times=times.tolist(),
        measured_linf=m.linf.tolist(),
        envelope_linf=env_linf.tolist(),
        measured_tv=m.tv.tolist(),
        envelope_tv=env_tv.tolist(),
        mass=list(trajectory.masses),
        mass_drift=float(np.abs(np.asarray(trajectory.masses) - trajectory.initial_mass).max()),
        entropy_residual_max=list(entropy.series) if entropy else [],
        entropy_constant=entropy.constant if entropy else None,
        l1_contraction_series=l1_series,
        lipschitz_quotient=results["lipschitz"].measured if "lipschitz" in results else None,
        u_max=envelopes.u_max,
        tv_max=envelopes.tv_max,
        c_constants=list(envelopes.constants),
        one_sided_time_difference=one_sided,
        checks=results,
    )

    paths: tuple[Path, ...] = ()
    if output_dir is not None:
        paths = tuple(write_run(output_dir, report, trajectory, cells))

    if report.passed:
        logger.info("%s: all %s checks passed", cfg.name, len(results))
    else:
        logger.warning("%s: failed checks %s", cfg.name, report.failed_checks)
    return RunOutcome(report=report, trajectory=trajectory, paths=paths)


# ============================================
# 4. Studies
# ============================================
def convergence_study(
    cfg: RunConfig,
    resolutions: Sequence[int] = CONVERGENCE_RESOLUTIONS,
    output_dir: str | Path | None = None,
) -> ConvergenceReport:
    """
    L1 error against the configured reference at each resolution and the
    observed orders between consecutive resolutions.

    Raises:
        UsageError: fewer than two resolutions or reference = none
    """
    resolutions = sorted(int(n) for n in resolutions)
    if len(resolutions) < 2:
        raise UsageError("a convergence study needs two or more resolutions")
    if cfg.checks.reference == "none":
        raise UsageError(f"{cfg.name}: reference = none; set [checks] reference = oracle or fine_grid")

    problems = [build_problem(cfg.with_resolution(n)) for n in resolutions]
    references = reference_averages(problems[-1], [p.cells for p in problems])

    errors, scale = [], 0.0
    for p, ref in zip(problems, references):
        trajectory = run(p.u0, cfg.scheme, p.cells, p.metric, p.flux)
        volumes = trajectory.snapshots[-1].cell_volumes
        errors.append(math.fsum(np.abs(trajectory.final.u - ref) * volumes))
        scale = max(scale, math.fsum(np.abs(ref) * volumes))
        logger.info("%s: n=%s L1 error %.6e", cfg.name, p.cells.n, errors[-1])

    orders = eoc_table(errors, resolutions, scale)
    exact_floor = 1e-13 * max(scale, 1.0)
    rows = [ConvergenceRow(n=resolutions[0], error=errors[0], exact=errors[0] <= exact_floor)]
    for n, error, order in zip(resolutions[1:], errors[1:], orders):
        rows.append(ConvergenceRow(n=n, error=error, order=order, exact=order is None))

    report = ConvergenceReport(name=cfg.name, reference=cfg.checks.reference, rows=rows)
    if output_dir is not None:
        write_convergence(output_dir, report)
    return report


def vanishing_viscosity_study(
    cfg: RunConfig,
    epsilons: Sequence[float] = VISCOSITY_EPSILONS,
    n: int = VISCOSITY_N,
) -> ViscosityReport:
    """
    ||u_eps - u_0||_L1 at t_end for decreasing eps on one grid.

    Passes when the distance decreases monotonically and shrinks by at
    least 35% per halving of eps.
    """
    base = cfg.with_resolution(n)
    p = build_problem(base)
    inviscid = run(p.u0, base.scheme.model_copy(update={"epsilon": 0.0}), p.cells, p.metric, p.flux)

    errors = []
    for eps in epsilons:
        viscous = run(p.u0, base.scheme.model_copy(update={"epsilon": float(eps)}), p.cells, p.metric, p.flux)
        errors.append(l1_distance(viscous.final, inviscid.final, inviscid.snapshots[-1]))
        logger.info("%s: eps=%s ||u_eps - u_0||_L1 = %.6e", cfg.name, eps, errors[-1])

    ratios = [b / a if a > 0 else math.inf for a, b in zip(errors, errors[1:])]
    passed = all(r <= VISCOSITY_MAX_RATIO for r in ratios)
    return ViscosityReport(
        name=cfg.name, n=n, epsilons=list(epsilons), errors=errors, ratios=ratios, passed=passed
    )


def _orders_within(report: ConvergenceReport, lo: float, hi: float) -> bool:
    return all(o is not None and lo <= o <= hi for o in report.orders)


def _exact(report: ConvergenceReport) -> bool:
    return all(row.exact or row.error <= 1e-10 for row in report.rows)


# name -> acceptance rule for the orders of its convergence study
CONVERGENCE_SUITE: dict[str, Callable[[ConvergenceReport], bool]] = {
    "burgers_flat_circle": lambda r: _orders_within(r, 0.75, 1.1),
    "linear_advection_flat_circle": lambda r: _orders_within(r, 0.75, 1.1),
    "expanding_circle_compression": _exact,
}


def check_all(output_dir: str | Path | None = None, threads: int | None = None) -> list[SuiteEntry]:
    """
    Every catalog scenario at the baseline resolution, the convergence
    studies and the vanishing-viscosity study.
    """
    # Local import to avoid circular imports
    from mclaw.services.scenarios import get_scenario, list_scenarios

    settings = get_settings()
    threads = threads or settings.threads
    output_dir = output_dir if output_dir is not None else settings.output_dir

    def scenario_entry(name: str) -> SuiteEntry:
        try:
            outcome = run_scenario(get_scenario(name, settings.baseline_n), output_dir)
        except MclawError as e:
            logger.error("%s aborted: %s", name, e)
            return SuiteEntry(name=name, kind="scenario", passed=False, detail=f"aborted: {e}")
        failed = outcome.report.failed_checks
        detail = "failed: " + ", ".join(failed) if failed else f"{len(outcome.report.checks)} checks"
        return SuiteEntry(name=name, kind="scenario", passed=not failed, detail=detail)

    names = [s.name for s in list_scenarios()]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        entries = list(pool.map(scenario_entry, names))

    for name, accept in CONVERGENCE_SUITE.items():
        try:
            report = convergence_study(get_scenario(name), CONVERGENCE_RESOLUTIONS, output_dir)
        except MclawError as e:
            entries.append(SuiteEntry(name=name, kind="convergence", passed=False, detail=f"aborted: {e}"))
            continue
        orders = ", ".join("exact" if o is None else f"{o:.3f}" for o in report.orders)
        entries.append(SuiteEntry(name=name, kind="convergence", passed=accept(report), detail=f"orders {orders}"))

    try:
        base = get_scenario("viscous_burgers_0.01").with_scheme(t_end=0.1, output_times=[])
        viscosity = vanishing_viscosity_study(base)
        ratios = ", ".join(f"{r:.3f}" for r in viscosity.ratios)
        entries.append(
            SuiteEntry(name="vanishing_viscosity", kind="viscosity", passed=viscosity.passed, detail=f"ratios {ratios}")
        )
    except MclawError as e:
        entries.append(SuiteEntry(name="vanishing_viscosity", kind="viscosity", passed=False, detail=f"aborted: {e}"))

    passed = sum(e.passed for e in entries)
    logger.info("check-all: %s/%s passed", passed, len(entries))
    return entries
