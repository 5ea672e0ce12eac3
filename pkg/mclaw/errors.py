# mclaw/errors.py
"""
Exception hierarchy.

Each error carries the process exit code the CLI returns for it:
    2 - configuration / usage problems
    3 - numerical aborts (geometry, solver, oracle)
Check failures are not exceptions; they produce exit code 1.
"""

from dataclasses import dataclass


class MclawError(Exception):
    """Base class for all mclaw errors."""

    exit_code: int = 3


@dataclass(frozen=True)
class ConfigIssue:
    """One problem found in a run configuration."""

    message: str
    line: int | None = None

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


class ConfigurationError(MclawError):
    """Invalid run configuration; collects every issue, not just the first."""

    exit_code = 2

    def __init__(self, issues: list[ConfigIssue] | str):
        if isinstance(issues, str):
            issues = [ConfigIssue(issues)]
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


class UsageError(MclawError):
    """Operation called with incompatible arguments."""

    exit_code = 2


class GeometryError(MclawError):
    """Metric sample is not symmetric positive definite."""

    exit_code = 3


class SolverAbort(MclawError):
    """Time stepping cannot continue (non-finite state, degenerate time step)."""

    exit_code = 3

    def __init__(self, message: str, step: int | None = None):
        self.step = step
        super().__init__(message if step is None else f"step {step}: {message}")


class OracleError(MclawError):
    """Characteristics oracle failed (usually near-shock data)."""

    exit_code = 3
