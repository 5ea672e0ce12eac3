# mclaw/commands/run.py
"""`mclaw run <config>`: solve one scenario and evaluate its checks."""

import logging

from mclaw.commands._common import add_output_dir, output_dir, resolve_config
from mclaw.services.runner import run_scenario

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("run", help="run one config file or catalog scenario")
    parser.add_argument("config", help="config file path or scenario name")
    parser.add_argument("--n", type=int, default=None, help="override the grid resolution")
    add_output_dir(parser)
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    cfg = resolve_config(args.config, args.n)
    outcome = run_scenario(cfg, output_dir(args))
    report = outcome.report

    for name, check in report.checks.items():
        verdict = "pass" if check.passed else "FAIL"
        print(f"{name:16s} {verdict:4s}  measured={check.measured:.6g}  bound={check.bound:.6g}  {check.detail}")
    if report.passed:
        print(f"{report.name}: all {len(report.checks)} checks passed")
    else:
        print(f"{report.name}: failed checks: {', '.join(report.failed_checks)}")
    return outcome.exit_code
