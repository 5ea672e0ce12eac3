"""
Services package.

The operations, separated from the data types in mclaw.models and the
boundary schemas in mclaw.schemas.
"""

from mclaw.services.config_parser import load_config, parse_config
from mclaw.services.families import initial_data, make_flux, make_metric
from mclaw.services.oracle import characteristics_oracle, oracle_cell_averages
from mclaw.services.runner import (
    build_problem,
    check_all,
    convergence_study,
    run_scenario,
    vanishing_viscosity_study,
)
from mclaw.services.scenarios import get_scenario, list_scenarios
from mclaw.services.solver import run, step

__all__ = [
    # Config
    "load_config",
    "parse_config",
    # Families
    "initial_data",
    "make_flux",
    "make_metric",
    # Solver
    "run",
    "step",
    # Oracle
    "characteristics_oracle",
    "oracle_cell_averages",
    # Runner
    "build_problem",
    "check_all",
    "convergence_study",
    "run_scenario",
    "vanishing_viscosity_study",
    # Scenarios
    "get_scenario",
    "list_scenarios",
]
