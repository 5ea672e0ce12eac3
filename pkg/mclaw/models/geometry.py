# mclaw/models/geometry.py
"""
Geometry models - chart points, metric fields and metric samples.

A MetricField is a time-dependent Riemannian metric on the periodic
chart [0,1)^d (d = 1 circle, d = 2 torus). It is given either as a
tensor callable g_ij(r, t) or as an embedding X(r, t) into R^m whose
pullback sum_a dX^a/dr^i dX^a/dr^j is the metric.

All callables are vectorized: r has shape (..., d), t is a float.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

ArrayFn = Callable[[np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class ChartPoint:
    """A point (r, t) of the chart; coordinates are wrapped into [0, 1)."""

    r: tuple[float, ...]
    t: float = 0.0

    def __post_init__(self):
        wrapped = tuple(float(x) % 1.0 for x in self.r)
        # -1e-17 % 1.0 rounds to 1.0
        wrapped = tuple(0.0 if x >= 1.0 else x for x in wrapped)
        object.__setattr__(self, "r", wrapped)
        object.__setattr__(self, "t", float(self.t))

    @property
    def dim(self) -> int:
        return len(self.r)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.r, dtype=float)


@dataclass(frozen=True, eq=False)
class MetricField:
    """
    Time-dependent metric on a periodic chart.

    Exactly one of `tensor` / `embedding` is the source. Derivative
    callables are optional; missing ones fall back to centered finite
    differences with step `fd_step`.

    Shapes:
        tensor, tensor_dt      -> (..., d, d)
        tensor_dr              -> (..., d, d, d), [k, i, j] = d_k g_ij
        embedding              -> (..., m)
        jacobian, jacobian_dt  -> (..., d, m),    [i, a]    = d_i X^a
        jacobian_dr            -> (..., d, d, m), [k, i, a] = d_k d_i X^a
    """

    dim: int
    name: str
    tensor: ArrayFn | None = None
    tensor_dt: ArrayFn | None = None
    tensor_dr: ArrayFn | None = None
    embedding: ArrayFn | None = None
    jacobian: ArrayFn | None = None
    jacobian_dt: ArrayFn | None = None
    jacobian_dr: ArrayFn | None = None
    static: bool = False
    fd_step: float = 1e-5
    t_range: tuple[float, float] = (0.0, math.inf)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"metric dimension must be 1 or 2, got {self.dim}")
        if (self.tensor is None) == (self.embedding is None):
            raise ValueError("exactly one of tensor / embedding must be given")

    def __repr__(self) -> str:
        return f"<MetricField(name={self.name}, dim={self.dim}, static={self.static})>"


@dataclass(frozen=True, eq=False)
class GeometricSample:
    """Metric-derived quantities at one chart point; partial samples leave fields None."""

    point: ChartPoint
    g: np.ndarray
    g_inv: np.ndarray
    sqrt_det_g: float
    compression_rate: float | None = None  # lambda, d_t log sqrt(det g)
    christoffel: np.ndarray | None = None  # [k, i, j] = Gamma^k_ij
    ricci: np.ndarray | None = None
    dt_g: np.ndarray | None = None
    one_sided_time_difference: bool = False
