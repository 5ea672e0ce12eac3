# mclaw/commands/converge.py
"""`mclaw converge <config> --resolutions 64,128,256`: EOC table on stdout and CSV."""

import argparse

from mclaw.commands._common import add_output_dir, output_dir, resolve_config
from mclaw.services.runner import CONVERGENCE_RESOLUTIONS, convergence_study


def _resolutions(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if any(n < 4 for n in values):
        raise argparse.ArgumentTypeError("n must be >= 4")
    return values


def register(subparsers) -> None:
    parser = subparsers.add_parser("converge", help="observed order of convergence against a reference")
    parser.add_argument("config", help="config file path or scenario name")
    parser.add_argument(
        "--resolutions",
        type=_resolutions,
        default=list(CONVERGENCE_RESOLUTIONS),
        help="comma-separated grid resolutions (default: 64,128,256)",
    )
    add_output_dir(parser)
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    cfg = resolve_config(args.config)
    report = convergence_study(cfg, args.resolutions, output_dir(args))

    print(f"{'n':>6s}  {'L1 error':>14s}  order")
    for row in report.rows:
        if row.exact:
            order = "exact"
        elif row.order is None:
            order = "-"
        else:
            order = f"{row.order:.3f}"
        print(f"{row.n:6d}  {row.error:14.6e}  {order}")
    return 0
