# mclaw/schemas/report.py
"""
Report schemas - everything a run writes to report.json and
convergence.csv.
"""

from pydantic import BaseModel, Field


class CConstants(BaseModel):
    """
    Sampled estimate constants at one time.

    Example:
    {
        "t": 0.0, "c2": 0.0, "c3": 0.0, "c4": 0.0,
        "c5": 0.0, "c6": 0.0, "c7": 1.0,
        "u_max": 1.0, "sample_resolution": 64, "u_samples": 65
    }
    """

    t: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float
    c7: float
    u_max: float
    sample_resolution: int
    u_samples: int


class CheckResult(BaseModel):
    """
    Verdict of one check; serialized as {pass, measured, bound, tolerance}.
    """

    name: str
    passed: bool = Field(serialization_alias="pass")
    measured: float
    bound: float
    tolerance: float
    detail: str = ""

    model_config = {"populate_by_name": True}


class BoundsReport(BaseModel):
    """Measured series against their envelopes, plus check verdicts."""

    name: str
    dim: int
    n: int
    numerical_flux: str
    epsilon: float
    steps: int
    dt_min: float
    dt_max: float

    times: list[float]
    measured_linf: list[float]
    envelope_linf: list[float]
    measured_tv: list[float]
    envelope_tv: list[float]
    mass: list[float]
    mass_drift: float
    entropy_residual_max: list[float]
    entropy_constant: float | None = None  # residual / (dr + dt)
    l1_contraction_series: list[float] = []
    lipschitz_quotient: float | None = None

    u_max: float
    tv_max: float
    c_constants: list[CConstants]
    one_sided_time_difference: bool = False

    checks: dict[str, CheckResult] = {}

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def failed_checks(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.passed]


class ConvergenceRow(BaseModel):
    n: int
    error: float
    order: float | None = None  # None for the coarsest row and for exact rows
    exact: bool = False


class ConvergenceReport(BaseModel):
    name: str
    reference: str
    rows: list[ConvergenceRow]

    @property
    def orders(self) -> list[float | None]:
        return [row.order for row in self.rows[1:]]


class ViscosityReport(BaseModel):
    """L1 distance between viscous and inviscid runs as epsilon is halved."""

    name: str
    n: int
    epsilons: list[float]
    errors: list[float]
    ratios: list[float]  # errors[i+1] / errors[i]
    passed: bool


class SuiteEntry(BaseModel):
    """One line of the check-all summary."""

    name: str
    kind: str  # scenario | convergence | viscosity
    passed: bool
    detail: str = ""
