# mclaw/commands/list_scenarios.py
"""`mclaw list-scenarios`"""

from mclaw.services.scenarios import list_scenarios


def register(subparsers) -> None:
    parser = subparsers.add_parser("list-scenarios", help="list the built-in scenario catalog")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    scenarios = list_scenarios()
    width = max(len(s.name) for s in scenarios)
    for s in scenarios:
        print(f"{s.name:{width}s}  {s.description}")
    return 0
