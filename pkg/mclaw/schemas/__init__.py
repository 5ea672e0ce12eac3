"""
Pydantic schemas package.

All schemas are exported here for easy importing:
    from mclaw.schemas import RunConfig, SchemeConfig, BoundsReport
"""

# Run configuration
from mclaw.schemas.config import (
    KNOWN_CHECKS,
    ChecksSection,
    FluxSection,
    GeometrySection,
    GridSection,
    InitialSection,
    RunConfig,
    SchemeConfig,
)

# Reports
from mclaw.schemas.report import (
    BoundsReport,
    CConstants,
    CheckResult,
    ConvergenceReport,
    ConvergenceRow,
    SuiteEntry,
    ViscosityReport,
)

__all__ = [
    "KNOWN_CHECKS",
    "ChecksSection",
    "FluxSection",
    "GeometrySection",
    "GridSection",
    "InitialSection",
    "RunConfig",
    "SchemeConfig",
    "BoundsReport",
    "CConstants",
    "CheckResult",
    "ConvergenceReport",
    "ConvergenceRow",
    "SuiteEntry",
    "ViscosityReport",
]
