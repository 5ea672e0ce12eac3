"""
CLI commands package.

One module per verb; each exposes register(subparsers) and sets the
handler the entry point calls with the parsed arguments.
"""

from mclaw.commands import check_all, converge, list_scenarios, run

__all__ = [
    "run",
    "converge",
    "list_scenarios",
    "check_all",
]
