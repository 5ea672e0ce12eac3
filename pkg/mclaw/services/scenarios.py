# mclaw/services/scenarios.py
"""
Built-in scenario catalog.

Each scenario is a config text in the run-config grammar, so a config
file can start from it with `[run] scenario = <name>` and override keys.
The grid resolution is left to the caller (check-all uses the
baseline resolution from Settings).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

from mclaw.errors import ConfigurationError
from mclaw.schemas.config import RunConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    text: str


_FLAT_CIRCLE_CHECKS = (
    "mass, linf, tv_envelope, tv_diminishing, entropy, comparison, "
    "l1_contraction, lipschitz, max_principle, killing"
)

_CATALOG = (
    Scenario(
        "burgers_flat_circle",
        "Burgers on the flat circle, smooth data up to t = 0.1 (before the shock)",
        f"""
        [geometry]
        metric = flat
        dim = 1
        [flux]
        family = burgers
        [initial]
        u0 = sin(2*pi*r1)
        [scheme]
        cfl = 0.9
        t_end = 0.1
        output_times = 0.025, 0.05, 0.075, 0.1
        [checks]
        run = {_FLAT_CIRCLE_CHECKS}, oracle_l1
        reference = oracle
        tolerances = oracle_l1: 0.02
        """,
    ),
    Scenario(
        "linear_advection_flat_circle",
        "Constant-speed transport on the flat circle",
        f"""
        [geometry]
        metric = flat
        [flux]
        family = linear_advection
        params = 1.0
        [initial]
        u0 = sin(2*pi*r1)
        [scheme]
        cfl = 0.9
        t_end = 0.25
        output_times = 0.05, 0.1, 0.15, 0.2, 0.25
        [checks]
        run = {_FLAT_CIRCLE_CHECKS}, oracle_l1
        reference = oracle
        tolerances = oracle_l1: 0.05
        """,
    ),
    Scenario(
        "killing_rotation_torus",
        "Rotation about the symmetry axis of a torus of revolution (a Killing field)",
        """
        [geometry]
        metric = torus_of_revolution
        params = 2.0, 1.0
        dim = 2
        [flux]
        family = killing_rotation
        params = 1.0
        [initial]
        u0 = sin(2*pi*r1) * cos(2*pi*r2)
        [scheme]
        cfl = 0.9
        t_end = 0.25
        output_times = 0.05, 0.1, 0.15, 0.2, 0.25
        [checks]
        run = mass, linf, tv_envelope, tv_diminishing, comparison, l1_contraction, lipschitz, max_principle, killing
        """,
    ),
    Scenario(
        "shear_flat_torus",
        "Shear flow on the flat 2-torus; not Killing, total variation grows",
        """
        [geometry]
        metric = flat
        dim = 2
        [flux]
        family = shear
        params = 1.0
        [initial]
        u0 = sin(2*pi*(r1 + r2))
        [scheme]
        cfl = 0.9
        t_end = 0.5
        output_times = 0.1, 0.2, 0.3, 0.4, 0.5
        [checks]
        run = mass, linf, tv_envelope, tv_growth, comparison, l1_contraction, lipschitz, max_principle
        """,
    ),
    Scenario(
        "expanding_circle_compression",
        "Zero flux on a circle of radius 1 + t; u = u0 / (1 + t)",
        """
        [geometry]
        metric = expanding_circle
        params = 1.0, 1.0
        [flux]
        family = linear_advection
        params = 0.0
        [initial]
        u0 = 1 + 0.5*sin(2*pi*r1)
        [scheme]
        cfl = 0.9
        t_end = 1.0
        output_times = 0.25, 0.5, 0.75, 1.0
        [checks]
        run = mass, linf, tv_envelope, entropy, entropy_refinement, comparison, l1_contraction, lipschitz, oracle_l1
        reference = oracle
        tolerances = oracle_l1: 1e-10
        oracle_steps = 2000
        """,
    ),
    Scenario(
        "dilation_torus_compression",
        "Zero flux on a uniformly shrinking flat torus, g = exp(-2t) I",
        """
        [geometry]
        metric = dilation
        params = 1.0, 1.0
        dim = 2
        [flux]
        family = linear_advection
        params = 0.0, 0.0
        [initial]
        u0 = sin(2*pi*r1) * cos(2*pi*r2)
        [scheme]
        cfl = 0.9
        t_end = 0.5
        output_times = 0.1, 0.2, 0.3, 0.4, 0.5
        [checks]
        run = mass, linf, tv_envelope, comparison, l1_contraction, lipschitz, oracle_l1
        reference = oracle
        tolerances = oracle_l1: 1e-10
        """,
    ),
    Scenario(
        "wavy_circle_compressible",
        "Compressible transport on a circle with a non-uniform static metric",
        """
        [geometry]
        metric = wavy_circle
        params = 1.0
        [flux]
        family = compressible
        params = 1 + 0.5*sin(2*pi*r1)
        [initial]
        u0 = sin(2*pi*r1)
        [scheme]
        cfl = 0.9
        t_end = 0.2
        output_times = 0.05, 0.1, 0.15, 0.2
        [checks]
        run = mass, linf, tv_envelope, entropy, comparison, l1_contraction, lipschitz, oracle_l1
        reference = oracle
        tolerances = oracle_l1: 0.15
        """,
    ),
    Scenario(
        "viscous_burgers_0.01",
        "Viscous Burgers on the flat circle, eps = 0.01, through shock formation",
        f"""
        [geometry]
        metric = flat
        [flux]
        family = burgers
        [initial]
        u0 = sin(2*pi*r1)
        [scheme]
        cfl = 0.9
        epsilon = 0.01
        t_end = 0.3
        output_times = 0.1, 0.2, 0.3
        [checks]
        run = {_FLAT_CIRCLE_CHECKS}
        """,
    ),
    Scenario(
        "viscous_burgers_0.001",
        "Viscous Burgers on the flat circle, eps = 0.001, through shock formation",
        f"""
        [geometry]
        metric = flat
        [flux]
        family = burgers
        [initial]
        u0 = sin(2*pi*r1)
        [scheme]
        cfl = 0.9
        epsilon = 0.001
        t_end = 0.3
        output_times = 0.1, 0.2, 0.3
        [checks]
        run = {_FLAT_CIRCLE_CHECKS}
        """,
    ),
    Scenario(
        "riemann_burgers",
        "Burgers Riemann data: a shock at r = 1/2 and a rarefaction at r = 0",
        f"""
        [geometry]
        metric = flat
        [flux]
        family = burgers
        [initial]
        u0 = 1 - 2*pulse(r1, 0.5, 1)
        [scheme]
        cfl = 0.9
        t_end = 0.2
        output_times = 0.05, 0.1, 0.15, 0.2
        [checks]
        run = {_FLAT_CIRCLE_CHECKS}
        """,
    ),
    Scenario(
        "riemann_burgers_llf",
        "Burgers Riemann data with the local Lax-Friedrichs flux",
        f"""
        [geometry]
        metric = flat
        [flux]
        family = burgers
        [initial]
        u0 = 1 - 2*pulse(r1, 0.5, 1)
        [scheme]
        cfl = 0.9
        numerical_flux = local_lax_friedrichs
        t_end = 0.2
        output_times = 0.05, 0.1, 0.15, 0.2
        [checks]
        run = {_FLAT_CIRCLE_CHECKS}
        """,
    ),
)

SCENARIOS: dict[str, Scenario] = {s.name: s for s in _CATALOG}


def scenario_text(name: str, n: int) -> str:
    """Config text of a catalog scenario at resolution n."""
    scenario = SCENARIOS[name]
    body = "\n".join(line.strip() for line in scenario.text.strip().splitlines())
    return f"[run]\nname = {name}\n{body}\n[grid]\nn = {n}\n"


@lru_cache
def get_scenario(name: str, n: int = 64) -> RunConfig:
    """
    Catalog scenario as a validated RunConfig.

    Raises:
        ConfigurationError: unknown scenario name
    """
    if name not in SCENARIOS:
        raise ConfigurationError(f"unknown scenario {name!r}; available: {', '.join(SCENARIOS)}")
    # Local import to avoid circular imports
    from mclaw.services.config_parser import parse_config

    return parse_config(scenario_text(name, n))


def list_scenarios() -> list[Scenario]:
    return list(_CATALOG)
