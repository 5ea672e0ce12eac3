# mclaw/main.py
"""
Command-line entry point.

    mclaw run <config|scenario> [--n N] [--output-dir DIR]
    mclaw converge <config|scenario> --resolutions 64,128,256
    mclaw list-scenarios
    mclaw check-all [--threads N]

Exit codes: 0 pass, 1 check failure, 2 configuration error, 3 solver abort.
"""

import argparse
import logging
import sys

from mclaw import __version__
from mclaw.commands import check_all, converge, list_scenarios, run
from mclaw.config import get_settings
from mclaw.errors import ConfigurationError, MclawError

logger = logging.getLogger("mclaw")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mclaw",
        description="Finite-volume conservation laws on moving closed manifolds",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (run, converge, list_scenarios, check_all):
        command.register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    settings = get_settings()
    logging.basicConfig(
        level=logging.DEBUG if settings.debug else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0

    try:
        return args.handler(args)
    except ConfigurationError as e:
        for issue in e.issues:
            logger.error("config: %s", issue)
        return e.exit_code
    except MclawError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return e.exit_code
    except Exception:
        logger.exception("unexpected error")
        return 3


if __name__ == "__main__":
    sys.exit(main())
