# mclaw/services/expressions.py
"""
Symbolic expression helpers.

Metric and flux families are written as sympy expressions in the chart
coordinates r1, r2, time t and state u. Derivatives are taken
symbolically and compiled with lambdify to vectorized numpy callables.
"""

import logging
from typing import Callable, Iterable, Sequence

import numpy as np
import sympy as sp

from mclaw.errors import ConfigurationError

logger = logging.getLogger(__name__)

R1, R2, T, U = sp.symbols("r1 r2 t u", real=True)
COORDS = (R1, R2)


def _pulse(x, a, b):
    """Indicator of the half-open interval [a, b)."""
    x = np.asarray(x, dtype=float)
    return ((x >= a) & (x < b)).astype(float)


# Extra names accepted in expression strings
_PULSE = sp.Function("pulse")
_LOCALS = {
    "r1": R1,
    "r2": R2,
    "t": T,
    "u": U,
    "pi": sp.pi,
    "e": sp.E,
    "pulse": _PULSE,
}
_MODULES = [{"pulse": _pulse}, "numpy"]


def coords(dim: int) -> tuple[sp.Symbol, ...]:
    return COORDS[:dim]


def parse_expression(text: str, allowed: Iterable[sp.Symbol]) -> sp.Expr:
    """
    Parse an expression string such as "sin(2*pi*r1)".

    Raises:
        ConfigurationError: on syntax errors or unknown free symbols
    """
    try:
        expr = sp.sympify(text, locals=_LOCALS)
    except (sp.SympifyError, SyntaxError, TypeError) as e:
        raise ConfigurationError(f"cannot parse expression {text!r}: {e}")

    allowed = set(allowed)
    unknown = expr.free_symbols - allowed
    if unknown:
        names = ", ".join(sorted(str(s) for s in unknown))
        raise ConfigurationError(
            f"expression {text!r} uses unknown symbols: {names}"
        )
    return expr


def compile_array(exprs, args: Sequence[sp.Symbol]) -> Callable[..., np.ndarray]:
    """
    Compile a (nested) list of expressions into one vectorized callable.

    The returned function takes one array per symbol in `args` and
    returns an array of shape broadcast(args) + shape(exprs).
    """
    table = np.asarray(exprs, dtype=object)
    shape = table.shape
    funcs = [sp.lambdify(args, sp.sympify(e), modules=_MODULES) for e in table.ravel()]

    def evaluate(*values) -> np.ndarray:
        base = np.broadcast_shapes(*(np.shape(v) for v in values))
        out = np.empty(base + shape, dtype=float)
        flat = out.reshape(base + (-1,))
        for idx, fn in enumerate(funcs):
            flat[..., idx] = fn(*values)
        return out

    return evaluate


def chart_callable(fn: Callable[..., np.ndarray], dim: int) -> Callable:
    """Adapt fn(r1[, r2], t) to the (r, t) signature used by MetricField."""

    def evaluate(r: np.ndarray, t: float) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return fn(*(r[..., i] for i in range(dim)), float(t))

    return evaluate


def flux_callable(fn: Callable[..., np.ndarray], dim: int) -> Callable:
    """Adapt fn(r1[, r2], t, u) to the (r, t, u) signature used by FluxField."""

    def evaluate(r: np.ndarray, t: float, u) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return fn(*(r[..., i] for i in range(dim)), float(t), np.asarray(u, dtype=float))

    return evaluate


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on separators that are not nested inside parentheses/brackets."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail or parts:
        parts.append(tail)
    return [p for p in parts if p]


def real_roots(expr: sp.Expr, symbol: sp.Symbol) -> tuple[float, ...]:
    """Real roots of expr in symbol, or () when sympy cannot isolate them."""
    if not expr.has(symbol):
        return ()
    try:
        roots = sp.solve(sp.Eq(expr, 0), symbol)
    except (NotImplementedError, ValueError, TypeError):
        logger.debug("no closed-form roots for %s", expr)
        return ()
    out = []
    for root in roots:
        try:
            value = complex(root.evalf())
        except TypeError:
            continue
        if abs(value.imag) < 1e-12:
            out.append(value.real)
    return tuple(sorted(out))
