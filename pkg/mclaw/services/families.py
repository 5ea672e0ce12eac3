# mclaw/services/families.py
"""
Built-in metric and flux families.

Families are defined symbolically; all derivatives the solver and the
analysis need (d_t g, d_r g, embedding Jacobians, d_u f, d_r f, d_r d_u f)
are produced by sympy differentiation, so built-in families never fall
back to finite differences.

Metric families (name -> positional parameters):
    flat(dim)                         g = identity
    dilation(a0, rate)                g = a(t)^2 I, a = a0 exp(-rate t), d = 2
    expanding_circle(R0, rate)        X = (R0 + rate t)(cos 2 pi r, sin 2 pi r)
    wavy_circle(amp)                  g_11 = (2 + amp sin 2 pi r)^2
    torus_of_revolution(Rmaj, rmin)   surface of revolution in R^3, d = 2
    custom_embedding(X^1, ..., X^m)   expression strings in r1[, r2], t

Flux families are f = Y(r, t) * phi(u):
    burgers                           Y = (1, ..., 1), phi = u^2 / 2
    linear_advection(c_1, ..., c_d)   Y = c, phi = u
    killing_rotation(omega)           Y = omega d/dr1, phi = u
    shear(amp)                        Y = (amp sin 2 pi r2, 0), phi = u, d = 2
    compressible(Y^1, ..., Y^d)       expression strings in r1[, r2], t
"""

import logging
import math
from typing import Callable, Sequence

import numpy as np
import sympy as sp

from mclaw.errors import ConfigurationError
from mclaw.models.flux import FluxField
from mclaw.models.geometry import MetricField
from mclaw.services.expressions import (
    T,
    U,
    chart_callable,
    compile_array,
    coords,
    flux_callable,
    parse_expression,
    real_roots,
)

logger = logging.getLogger(__name__)

TWO_PI = 2 * sp.pi


# ============================================
# 1. Metric builders
# ============================================
def metric_from_tensor(
    name: str,
    dim: int,
    g: sp.Matrix,
    params: dict | None = None,
    t_range: tuple[float, float] = (0.0, math.inf),
) -> MetricField:
    """Build a MetricField from a symbolic tensor g_ij(r, t)."""
    r = coords(dim)
    args = (*r, T)
    g = sp.Matrix(g)
    return MetricField(
        dim=dim,
        name=name,
        tensor=chart_callable(compile_array(g.tolist(), args), dim),
        tensor_dt=chart_callable(compile_array(g.diff(T).tolist(), args), dim),
        tensor_dr=chart_callable(
            compile_array([g.diff(c).tolist() for c in r], args), dim
        ),
        static=not any(e.has(T) for e in g),
        t_range=t_range,
        params=params or {},
    )


def metric_from_embedding(
    name: str,
    dim: int,
    X: Sequence[sp.Expr],
    params: dict | None = None,
    t_range: tuple[float, float] = (0.0, math.inf),
) -> MetricField:
    """Build a MetricField from a symbolic embedding X(r, t) into R^m."""
    r = coords(dim)
    args = (*r, T)
    X = [sp.sympify(x) for x in X]
    jac = [[sp.diff(x, c) for x in X] for c in r]  # [i][a]
    jac_dt = [[sp.diff(e, T) for e in row] for row in jac]
    jac_dr = [[[sp.diff(e, k) for e in row] for row in jac] for k in r]

    return MetricField(
        dim=dim,
        name=name,
        embedding=chart_callable(compile_array(X, args), dim),
        jacobian=chart_callable(compile_array(jac, args), dim),
        jacobian_dt=chart_callable(compile_array(jac_dt, args), dim),
        jacobian_dr=chart_callable(compile_array(jac_dr, args), dim),
        static=not any(x.has(T) for x in X),
        t_range=t_range,
        params=params or {},
    )


# ============================================
# 2. Built-in metric families
# ============================================
def flat(dim: int = 1) -> MetricField:
    return metric_from_tensor("flat", dim, sp.eye(dim), {"dim": dim})


def dilation(a0: float = 1.0, rate: float = 1.0, dim: int = 2) -> MetricField:
    a = sp.Float(a0) * sp.exp(-sp.Float(rate) * T)
    return metric_from_tensor(
        "dilation", dim, a**2 * sp.eye(dim), {"a0": a0, "rate": rate}
    )


def expanding_circle(R0: float = 1.0, rate: float = 1.0, dim: int = 1) -> MetricField:
    _require_dim("expanding_circle", dim, 1)
    (r1,) = coords(1)
    radius = sp.Float(R0) + sp.Float(rate) * T
    X = [radius * sp.cos(TWO_PI * r1), radius * sp.sin(TWO_PI * r1)]
    return metric_from_embedding("expanding_circle", 1, X, {"R0": R0, "rate": rate})


def wavy_circle(amp: float = 1.0, dim: int = 1) -> MetricField:
    _require_dim("wavy_circle", dim, 1)
    if abs(amp) >= 2.0:
        raise ConfigurationError("wavy_circle needs |amp| < 2 for a positive metric")
    (r1,) = coords(1)
    g = sp.Matrix([[(2 + sp.Float(amp) * sp.sin(TWO_PI * r1)) ** 2]])
    return metric_from_tensor("wavy_circle", 1, g, {"amp": amp})


def torus_of_revolution(Rmaj: float = 2.0, rmin: float = 1.0, dim: int = 2) -> MetricField:
    """r1 is the azimuth (around the axis), r2 the meridian angle, both scaled by 2 pi."""
    _require_dim("torus_of_revolution", dim, 2)
    if not 0 < rmin < Rmaj:
        raise ConfigurationError("torus_of_revolution needs 0 < rmin < Rmaj")
    r1, r2 = coords(2)
    phi, theta = TWO_PI * r1, TWO_PI * r2
    ring = sp.Float(Rmaj) + sp.Float(rmin) * sp.cos(theta)
    X = [ring * sp.cos(phi), ring * sp.sin(phi), sp.Float(rmin) * sp.sin(theta)]
    return metric_from_embedding(
        "torus_of_revolution", 2, X, {"Rmaj": Rmaj, "rmin": rmin}
    )


def custom_embedding(*expressions: str, dim: int = 1) -> MetricField:
    if len(expressions) < dim:
        raise ConfigurationError(
            f"custom_embedding needs at least {dim} component expressions"
        )
    allowed = (*coords(dim), T)
    X = [parse_expression(e, allowed) for e in expressions]
    return metric_from_embedding(
        "custom_embedding", dim, X, {"expressions": list(expressions)}
    )


METRIC_FAMILIES: dict[str, Callable[..., MetricField]] = {
    "flat": flat,
    "dilation": dilation,
    "expanding_circle": expanding_circle,
    "wavy_circle": wavy_circle,
    "torus_of_revolution": torus_of_revolution,
    "custom_embedding": custom_embedding,
}

# Families whose parameters are expression strings, not numbers
EXPRESSION_FAMILIES = {"custom_embedding", "compressible"}


def make_metric(name: str, params: Sequence, dim: int) -> MetricField:
    """
    Build a metric family by name.

    Raises:
        ConfigurationError: unknown family or bad parameters
    """
    builder = METRIC_FAMILIES.get(name)
    if builder is None:
        raise ConfigurationError(
            f"unknown metric family {name!r}; available: {', '.join(METRIC_FAMILIES)}"
        )
    if name == "flat":
        return flat(dim)
    return _call_family(builder, name, params, dim)


# ============================================
# 3. Flux builders
# ============================================
def flux_from_expressions(
    name: str,
    dim: int,
    field: Sequence[sp.Expr],
    profile: sp.Expr,
    u_range_hint: tuple[float, float] = (-1.0, 1.0),
) -> FluxField:
    """Build f = Y(r, t) * phi(u) with all derivatives taken symbolically."""
    r = coords(dim)
    args = (*r, T, U)
    Y = [sp.sympify(c) for c in field]
    if len(Y) != dim:
        raise ConfigurationError(f"flux {name!r} needs {dim} components, got {len(Y)}")
    profile = sp.sympify(profile)
    dprofile = sp.diff(profile, U)

    f = [y * profile for y in Y]
    df = [y * dprofile for y in Y]
    dr_f = [[sp.diff(c, k) for c in f] for k in r]  # [k][i] = d_k f^i
    dr_df = [[sp.diff(c, k) for c in df] for k in r]

    return FluxField(
        name=name,
        dim=dim,
        components=flux_callable(compile_array(f, args), dim),
        du_components=flux_callable(compile_array(df, args), dim),
        dr_components=flux_callable(compile_array(dr_f, args), dim),
        dr_du_components=flux_callable(compile_array(dr_df, args), dim),
        u_range_hint=u_range_hint,
        u_breakpoints=real_roots(sp.diff(dprofile, U), U),
        autonomous=not any(c.has(T) for c in f),
        stationary=all(c.is_zero is True for c in df),
    )


def burgers(dim: int = 1, profile: sp.Expr | None = None) -> FluxField:
    profile = U**2 / 2 if profile is None else profile
    return flux_from_expressions("burgers", dim, [sp.Integer(1)] * dim, profile)


def linear_advection(*speeds: float, dim: int = 1, profile: sp.Expr | None = None) -> FluxField:
    speeds = tuple(speeds) or (1.0,) * dim
    if len(speeds) != dim:
        raise ConfigurationError(
            f"linear_advection needs {dim} speed components, got {len(speeds)}"
        )
    Y = [sp.Float(c) for c in speeds]
    return flux_from_expressions("linear_advection", dim, Y, U if profile is None else profile)


def killing_rotation(omega: float = 1.0, dim: int = 1, profile: sp.Expr | None = None) -> FluxField:
    """omega times the coordinate field d/dr1; Killing when g does not depend on r1."""
    Y = [sp.Float(omega)] + [sp.Integer(0)] * (dim - 1)
    return flux_from_expressions("killing_rotation", dim, Y, U if profile is None else profile)


def shear(amp: float = 1.0, dim: int = 2, profile: sp.Expr | None = None) -> FluxField:
    _require_dim("shear", dim, 2)
    _, r2 = coords(2)
    Y = [sp.Float(amp) * sp.sin(TWO_PI * r2), sp.Integer(0)]
    return flux_from_expressions("shear", 2, Y, U if profile is None else profile)


def compressible(*expressions: str, dim: int = 1, profile: sp.Expr | None = None) -> FluxField:
    allowed = (*coords(dim), T)
    Y = [parse_expression(e, allowed) for e in expressions]
    return flux_from_expressions("compressible", dim, Y, U if profile is None else profile)


FLUX_FAMILIES: dict[str, Callable[..., FluxField]] = {
    "burgers": burgers,
    "linear_advection": linear_advection,
    "killing_rotation": killing_rotation,
    "shear": shear,
    "compressible": compressible,
}


def make_flux(name: str, params: Sequence, dim: int, profile: str | None = None) -> FluxField:
    """
    Build a flux family by name, optionally with a profile phi(u) expression.

    Raises:
        ConfigurationError: unknown family or bad parameters
    """
    builder = FLUX_FAMILIES.get(name)
    if builder is None:
        raise ConfigurationError(
            f"unknown flux family {name!r}; available: {', '.join(FLUX_FAMILIES)}"
        )
    extra = {}
    if profile:
        extra["profile"] = parse_expression(profile, (U,))
    if name == "burgers":
        return burgers(dim, **extra)
    return _call_family(builder, name, params, dim, **extra)


def _call_family(builder, name: str, params: Sequence, dim: int, **extra):
    if name in EXPRESSION_FAMILIES:
        values = [str(p) for p in params]
    else:
        try:
            values = [float(p) for p in params]
        except (TypeError, ValueError):
            raise ConfigurationError(f"{name} parameters must be numbers, got {list(params)}")
    try:
        return builder(*values, dim=dim, **extra)
    except TypeError as e:
        raise ConfigurationError(f"bad parameters for {name}: {e}")


def _require_dim(name: str, dim: int, expected: int) -> None:
    if dim != expected:
        raise ConfigurationError(f"{name} is defined for dim={expected}, got dim={dim}")


# ============================================
# 4. Initial data
# ============================================
def initial_data(expression: str, dim: int) -> Callable[[np.ndarray], np.ndarray]:
    """Compile an initial-data expression u0(r1[, r2]) into r -> u0(r)."""
    r = coords(dim)
    expr = parse_expression(expression, r)
    fn = compile_array([expr], r)

    def u0(points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return fn(*(points[..., i] for i in range(dim)))[..., 0]

    return u0
