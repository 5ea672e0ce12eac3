# mclaw/commands/_common.py
"""
Helpers shared by the commands: resolving a config argument that is
either a file path or a catalog scenario name.
"""

from pathlib import Path

from mclaw.config import get_settings
from mclaw.errors import ConfigurationError
from mclaw.schemas.config import RunConfig
from mclaw.services.config_parser import load_config
from mclaw.services.scenarios import SCENARIOS, get_scenario


def resolve_config(target: str, n: int | None = None) -> RunConfig:
    """
    Load a run configuration from a file, or take a catalog scenario by name.

    Raises:
        ConfigurationError: neither an existing file nor a known scenario
    """
    path = Path(target)
    if path.is_file():
        cfg = load_config(path)
    elif target in SCENARIOS:
        cfg = get_scenario(target, get_settings().baseline_n)
    else:
        raise ConfigurationError(
            f"{target!r} is neither a config file nor a scenario; available: {', '.join(SCENARIOS)}"
        )
    return cfg.with_resolution(n) if n else cfg


def add_output_dir(parser) -> None:
    parser.add_argument(
        "--output-dir",
        default=None,
        help="directory for result files (default: MCLAW_OUTPUT_DIR or ./results)",
    )


def output_dir(args) -> str:
    return args.output_dir or get_settings().output_dir
