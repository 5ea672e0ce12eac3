# mclaw/commands/check_all.py
"""`mclaw check-all`: the full acceptance catalog."""

from mclaw.commands._common import add_output_dir, output_dir
from mclaw.services.runner import check_all


def register(subparsers) -> None:
    parser = subparsers.add_parser("check-all", help="run every scenario, convergence and viscosity study")
    parser.add_argument("--threads", type=int, default=None, help="worker count (default: MCLAW_THREADS)")
    add_output_dir(parser)
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    entries = check_all(output_dir(args), args.threads)
    width = max(len(e.name) for e in entries)
    for e in entries:
        verdict = "pass" if e.passed else "FAIL"
        print(f"{e.name:{width}s}  {e.kind:11s}  {verdict:4s}  {e.detail}")
    failed = [e.name for e in entries if not e.passed]
    print(f"{len(entries) - len(failed)}/{len(entries)} passed")
    return 1 if failed else 0
