# mclaw/models/flux.py
"""
Flux model - the family of vector fields f(x, t, u).

Components are chart components f^i. Callables take r of shape (..., d),
a float t and u broadcastable against r[..., 0]; they return (..., d)
for vectors and (..., d, d) with [k, i] = d_k f^i for spatial Jacobians.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

FluxFn = Callable[[np.ndarray, float, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class FluxField:
    """Flux family with its u-derivative and (optional) spatial Jacobians."""

    name: str
    dim: int
    components: FluxFn
    du_components: FluxFn
    dr_components: FluxFn | None = None
    dr_du_components: FluxFn | None = None
    u_range_hint: tuple[float, float] = (-1.0, 1.0)
    # Endpoints of monotone intervals of d_u f, added to u-sampling
    u_breakpoints: tuple[float, ...] = ()
    autonomous: bool = False  # no explicit time dependence
    stationary: bool = False  # d_u f vanishes identically
    fd_step: float = 1e-5

    def __repr__(self) -> str:
        return f"<FluxField(name={self.name}, dim={self.dim})>"
