from mclaw.models.geometry import ChartPoint, MetricField, GeometricSample
from mclaw.models.flux import FluxField
from mclaw.models.grid import CellComplex, GeometrySnapshot
from mclaw.models.state import State, StepRecord, Trajectory

__all__ = [
    "ChartPoint",
    "MetricField",
    "GeometricSample",
    "FluxField",
    "CellComplex",
    "GeometrySnapshot",
    "State",
    "StepRecord",
    "Trajectory",
]
