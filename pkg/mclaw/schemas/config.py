# mclaw/schemas/config.py
"""
Run configuration schemas.

Config files are parsed into plain dicts by mclaw.services.config_parser
and validated here. Section names match the file sections:
[run] [geometry] [flux] [initial] [grid] [scheme] [checks]
"""

from typing import Literal

from pydantic import BaseModel, Field, field_validator, model_validator

NumericalFlux = Literal["local_lax_friedrichs", "engquist_osher"]
Reference = Literal["none", "oracle", "fine_grid"]

KNOWN_CHECKS = (
    "mass",
    "linf",
    "tv_envelope",
    "tv_diminishing",
    "tv_growth",
    "entropy",
    "entropy_refinement",
    "comparison",
    "l1_contraction",
    "lipschitz",
    "oracle_l1",
    "max_principle",
    "killing",
)


class SchemeConfig(BaseModel):
    """
    Time stepping parameters.

    Example:
    {
        "numerical_flux": "engquist_osher",
        "cfl": 0.45,
        "epsilon": 0.0,
        "t_end": 0.1,
        "output_times": [0.05, 0.1]
    }
    """

    numerical_flux: NumericalFlux = "engquist_osher"
    cfl: float = Field(default=0.45, gt=0.0, le=1.0)
    epsilon: float = Field(default=0.0, ge=0.0)
    t_end: float = Field(default=0.1, gt=0.0)
    max_steps: int = Field(default=1_000_000, ge=1)
    output_times: list[float] = []

    model_config = {"frozen": True, "extra": "forbid"}

    @model_validator(mode="after")
    def check_output_times(self):
        outside = [t for t in self.output_times if not 0.0 <= t <= self.t_end]
        if outside:
            raise ValueError(f"output_times {outside} outside [0, t_end={self.t_end}]")
        return self

    def times(self) -> list[float]:
        """Sorted output times, always ending at t_end."""
        return sorted({float(t) for t in self.output_times} | {self.t_end})


class GeometrySection(BaseModel):
    metric: str
    params: list[str] = []
    dim: int = Field(default=1, ge=1, le=2)

    model_config = {"frozen": True, "extra": "forbid"}


class FluxSection(BaseModel):
    family: str
    params: list[str] = []
    profile: str | None = None  # phi(u); the family default when absent

    model_config = {"frozen": True, "extra": "forbid"}


class InitialSection(BaseModel):
    u0: str = "sin(2*pi*r1)"

    model_config = {"frozen": True, "extra": "forbid"}


class GridSection(BaseModel):
    n: int
    quadrature_order: int = Field(default=4, ge=1, le=12)

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("n")
    @classmethod
    def check_n(cls, v: int) -> int:
        if v < 4:
            raise ValueError("n must be >= 4")
        return v


class ChecksSection(BaseModel):
    """
    Checks to evaluate after the run.

    `tolerances` overrides per-check defaults, `reference` selects what
    the oracle_l1 check and convergence studies compare against.
    """

    run: list[str] = []
    seed: int = 0
    tolerances: dict[str, float] = {}
    reference: Reference = "none"
    oracle_steps: int = Field(default=200, ge=4)
    kruzkov_constants: int = Field(default=17, ge=2)
    sample_resolution: int | None = Field(default=None, ge=4)

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("run")
    @classmethod
    def check_names(cls, v: list[str]) -> list[str]:
        unknown = [c for c in v if c not in KNOWN_CHECKS]
        if unknown:
            raise ValueError(
                f"unknown checks {unknown}; available: {', '.join(KNOWN_CHECKS)}"
            )
        return v

    @field_validator("tolerances")
    @classmethod
    def check_tolerance_names(cls, v: dict[str, float]) -> dict[str, float]:
        unknown = [c for c in v if c not in KNOWN_CHECKS]
        if unknown:
            raise ValueError(f"tolerances for unknown checks {unknown}")
        return v


class RunConfig(BaseModel):
    """
    A complete, validated run.

    Example (file form):
        [run]
        name = burgers_flat_circle
        [geometry]
        metric = flat
        [flux]
        family = burgers
        [grid]
        n = 64
    """

    name: str = "run"
    scenario: str | None = None
    geometry: GeometrySection
    flux: FluxSection
    initial: InitialSection = InitialSection()
    grid: GridSection
    scheme: SchemeConfig = SchemeConfig()
    checks: ChecksSection = ChecksSection()

    model_config = {"frozen": True, "extra": "forbid"}

    def with_resolution(self, n: int) -> "RunConfig":
        return self.model_copy(update={"grid": self.grid.model_copy(update={"n": n})})

    def with_scheme(self, **changes) -> "RunConfig":
        return self.model_copy(update={"scheme": self.scheme.model_copy(update=changes)})
