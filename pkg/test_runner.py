# test_runner.py
"""Test scenario runs, reference solutions, the studies and the result files."""

import json

import numpy as np
import pytest

from mclaw.errors import UsageError
from mclaw.schemas.report import ConvergenceReport, ConvergenceRow
from mclaw.services.config_parser import parse_config
from mclaw.services.oracle import oracle_cell_averages
from mclaw.services.output import report_payload, state_filename
from mclaw.services.runner import (
    CONVERGENCE_SUITE,
    build_problem,
    convergence_study,
    reference_averages,
    run_scenario,
    vanishing_viscosity_study,
)
from mclaw.services.scenarios import SCENARIOS, get_scenario


def _scenario(name: str, n: int, **overrides) -> str:
    lines = [f"[run]\nscenario = {name}", f"[grid]\nn = {n}"]
    for section, body in overrides.items():
        lines.append(f"[{section}]\n{body}")
    return "\n".join(lines) + "\n"


def test_burgers_flat_circle_passes():
    """The smooth Burgers scenario passes every check at the baseline resolution."""
    outcome = run_scenario(get_scenario("burgers_flat_circle", 64))
    report = outcome.report
    for name, check in report.checks.items():
        print(f"  {name:16s} {check.passed}  {check.measured:.3e} / {check.bound:.3e}")
    assert report.passed, report.failed_checks
    assert outcome.exit_code == 0
    assert report.times == [0.0, 0.025, 0.05, 0.075, 0.1]
    assert len(report.entropy_residual_max) == len(report.times)
    assert report.mass_drift < 1e-12


def test_killing_rotation_torus_passes():
    outcome = run_scenario(get_scenario("killing_rotation_torus", 16))
    assert outcome.report.passed, outcome.report.failed_checks
    assert outcome.report.checks["killing"].measured < 1e-8


def test_shear_grows_total_variation():
    report = run_scenario(get_scenario("shear_flat_torus", 16)).report
    assert report.checks["tv_growth"].passed
    assert max(report.measured_tv) > report.measured_tv[0]
    assert report.passed, report.failed_checks


def test_expanding_circle_reports_one_sided_flag_off():
    """Analytic time derivatives: no one-sided differences are needed."""
    report = run_scenario(get_scenario("expanding_circle_compression", 32)).report
    assert report.passed, report.failed_checks
    assert report.one_sided_time_difference is False


def test_expanding_circle_entropy_constant_is_stable():
    """C measured at n and 2n agree within a factor of two."""
    report = run_scenario(get_scenario("expanding_circle_compression", 32)).report
    check = report.checks["entropy_refinement"]
    print(f"✓ {check.detail}")
    assert check.passed
    assert check.measured <= 2.0


def test_entropy_refinement_without_entropy_check():
    cfg = parse_config(_scenario("expanding_circle_compression", 16, checks="run = entropy_refinement"))
    report = run_scenario(cfg).report
    assert list(report.checks) == ["entropy_refinement"]
    assert report.entropy_constant is not None


def test_wavy_circle_matches_oracle():
    """Compressible transport on the wavy circle at the baseline resolution."""
    report = run_scenario(get_scenario("wavy_circle_compressible", 64)).report
    print(f"✓ oracle L1 error {report.checks['oracle_l1'].measured:.4f}")
    assert report.checks["oracle_l1"].measured < 0.15
    assert report.passed, report.failed_checks


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_every_scenario_runs_end_to_end(name):
    """Every catalog entry solves, measures and reports at a small resolution."""
    cfg = get_scenario(name, 16)
    outcome = run_scenario(cfg)
    report = outcome.report
    assert set(report.checks) == set(cfg.checks.run)
    assert report.steps > 0
    assert report.times[0] == 0.0 and report.times[-1] == pytest.approx(cfg.scheme.t_end)
    assert outcome.exit_code == (0 if report.passed else 1)
    # resolution-independent properties of a monotone scheme
    for check in ("mass", "comparison", "max_principle"):
        if check in report.checks:
            assert report.checks[check].passed, report.checks[check]


def test_oracle_check_without_reference():
    cfg = parse_config(_scenario("burgers_flat_circle", 16, checks="run = oracle_l1\nreference = none"))
    with pytest.raises(UsageError):
        run_scenario(cfg)


def test_fine_grid_reference_agrees_with_oracle():
    """Restricting a 4x finer run lands close to the oracle averages."""
    cfg = parse_config(_scenario("linear_advection_flat_circle", 16, checks="reference = fine_grid"))
    p = build_problem(cfg)
    (fine,) = reference_averages(p, [p.cells])
    exact = oracle_cell_averages(p.u0, p.flux, p.metric, p.cells, cfg.scheme.t_end)
    assert fine.shape == (16,)
    assert np.abs(fine - exact).max() < 0.1


def test_convergence_study_arguments():
    cfg = get_scenario("expanding_circle_compression", 16)
    with pytest.raises(UsageError):
        convergence_study(cfg, [16])
    no_reference = parse_config(_scenario("burgers_flat_circle", 16, checks="reference = none"))
    with pytest.raises(UsageError):
        convergence_study(no_reference, [16, 32])


def test_convergence_study_burgers_first_order(tmp_path):
    """Pre-shock Burgers against the oracle: orders near one."""
    report = convergence_study(get_scenario("burgers_flat_circle"), [64, 128], tmp_path)
    print(f"✓ orders {report.orders}")
    assert all(0.7 <= o <= 1.2 for o in report.orders)
    assert (tmp_path / "burgers_flat_circle" / "convergence.csv").exists()


def test_convergence_acceptance_rules():
    def report(*rows):
        return ConvergenceReport(name="x", reference="oracle", rows=list(rows))

    good = report(ConvergenceRow(n=64, error=0.1), ConvergenceRow(n=128, error=0.05, order=1.0))
    bad = report(ConvergenceRow(n=64, error=0.1), ConvergenceRow(n=128, error=0.09, order=0.15))
    exact = report(ConvergenceRow(n=64, error=1e-16, exact=True), ConvergenceRow(n=128, error=2e-16, exact=True))
    assert CONVERGENCE_SUITE["burgers_flat_circle"](good)
    assert not CONVERGENCE_SUITE["burgers_flat_circle"](bad)
    assert CONVERGENCE_SUITE["expanding_circle_compression"](exact)
    steep = report(ConvergenceRow(n=64, error=0.1), ConvergenceRow(n=128, error=0.045, order=1.15))
    assert CONVERGENCE_SUITE["linear_advection_flat_circle"](good)
    assert not CONVERGENCE_SUITE["linear_advection_flat_circle"](steep)


def test_vanishing_viscosity_distances_shrink():
    base = get_scenario("viscous_burgers_0.01").with_scheme(t_end=0.1, output_times=[])
    report = vanishing_viscosity_study(base, epsilons=(0.04, 0.02), n=128)
    assert len(report.errors) == 2 and len(report.ratios) == 1
    assert report.errors[1] < report.errors[0]
    print(f"✓ viscosity ratios {report.ratios}")


def test_report_payload_spells_out_pass():
    report = run_scenario(parse_config(_scenario("burgers_flat_circle", 16, checks="run = mass"))).report
    payload = json.loads(json.dumps(report_payload(report)))
    assert payload["checks"]["mass"]["pass"] is True
    assert "name" not in payload["checks"]["mass"]
    assert payload["passed"] is True
    assert payload["n"] == 16


def test_run_scenario_writes_files(tmp_path):
    cfg = parse_config(_scenario("burgers_flat_circle", 16, checks="run = mass, linf"))
    outcome = run_scenario(cfg, tmp_path)
    names = sorted(p.name for p in outcome.paths)
    assert "series.csv" in names and "report.json" in names
    assert sum(name.startswith("state_") for name in names) == 5


def test_state_files_keep_close_times_apart():
    times = [0.1, 0.1 + 1e-9, 0.30000000000000004, 0.3, 1.0]
    names = [state_filename(t) for t in times]
    assert len(set(names)) == len(times)
    assert names[0] == "state_0.1.csv"
    assert names[-1] == "state_1.0.csv"


if __name__ == "__main__":
    test_burgers_flat_circle_passes()
    test_convergence_acceptance_rules()
    print("\n✓ All tests passed!")
