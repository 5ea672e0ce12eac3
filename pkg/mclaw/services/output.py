# mclaw/services/output.py
"""
Result files.

Per run, under <output_dir>/<name>/:
- series.csv        t, linf, linf_envelope, tv, tv_envelope, mass, entropy_residual_max
- state_<t>.csv     cell_index, r1[, r2], u at every output time
- report.json       BoundsReport with a flat {check: {pass, measured, bound, tolerance}} map
Per convergence study: convergence.csv with n, error, order.
"""

import csv
import json
import logging
from pathlib import Path

from mclaw.config import get_settings
from mclaw.models.grid import CellComplex
from mclaw.models.state import Trajectory
from mclaw.schemas.report import BoundsReport, ConvergenceReport

logger = logging.getLogger(__name__)

SERIES_HEADER = ("t", "linf", "linf_envelope", "tv", "tv_envelope", "mass", "entropy_residual_max")


def _fmt(value: float | None, digits: int) -> str:
    if value is None:
        return ""
    return f"{value:.{digits}g}"


def run_directory(root: str | Path, name: str) -> Path:
    path = Path(root) / name
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_series(path: Path, report: BoundsReport) -> Path:
    digits = get_settings().csv_digits
    entropy = report.entropy_residual_max
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SERIES_HEADER)
        for i, t in enumerate(report.times):
            writer.writerow(
                [
                    _fmt(t, digits),
                    _fmt(report.measured_linf[i], digits),
                    _fmt(report.envelope_linf[i], digits),
                    _fmt(report.measured_tv[i], digits),
                    _fmt(report.envelope_tv[i], digits),
                    _fmt(report.mass[i], digits),
                    _fmt(entropy[i] if i < len(entropy) else None, digits),
                ]
            )
    return path


def state_filename(t: float) -> str:
    return f"state_{float(t)!r}.csv"


def write_states(directory: Path, trajectory: Trajectory, cells: CellComplex) -> list[Path]:
    """One CSV per output state; columns cell_index, r1[, r2], u."""
    digits = get_settings().csv_digits
    coords = [f"r{i + 1}" for i in range(cells.dim)]
    paths = []
    for state in trajectory.states:
        path = directory / state_filename(state.t)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["cell_index", *coords, "u"])
            for k in range(cells.n_cells):
                center = [_fmt(x, digits) for x in cells.cell_centers[k]]
                writer.writerow([k, *center, _fmt(state.u[k], digits)])
        paths.append(path)
    return paths


def report_payload(report: BoundsReport) -> dict:
    """JSON body: the report fields with checks keyed by name, 'pass' spelled out."""
    payload = report.model_dump(by_alias=True, exclude={"checks"})
    payload["passed"] = report.passed
    payload["checks"] = {
        name: check.model_dump(by_alias=True, exclude={"name"}) for name, check in report.checks.items()
    }
    return payload


def write_report(path: Path, report: BoundsReport) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report_payload(report), fh, indent=2, allow_nan=True)
    return path


def write_run(root: str | Path, report: BoundsReport, trajectory: Trajectory, cells: CellComplex) -> list[Path]:
    """Write every file of one run; returns the paths written."""
    directory = run_directory(root, report.name)
    paths = [
        write_series(directory / "series.csv", report),
        write_report(directory / "report.json", report),
        *write_states(directory, trajectory, cells),
    ]
    logger.info("wrote %s files to %s", len(paths), directory)
    return paths


def write_convergence(root: str | Path, report: ConvergenceReport) -> Path:
    digits = get_settings().csv_digits
    path = run_directory(root, report.name) / "convergence.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "error", "order"])
        for row in report.rows:
            order = "exact" if row.exact else _fmt(row.order, digits)
            writer.writerow([row.n, _fmt(row.error, digits), order])
    logger.info("wrote %s", path)
    return path
