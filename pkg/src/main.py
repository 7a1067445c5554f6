import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError

from src.cli.services.command_service import (
    EXIT_INPUT,
    IDENTITIES,
    CommandService,
    command_service,
)
from src.cli.services.registry_service import registry_service
from src.flow.model import IntegratorEnum
from src.utils.logger import logger

description = """
keller-dynamics: Jacobian-conjecture computations, u-gamma representations
and inverse-dynamics flows.
"""

log = logger()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="keller-dynamics", description=description)
    parser.add_argument(
        "--registry", metavar="PATH", help="JSON registry file with extra examples"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="Jacobian, determinant and Keller verdict")
    check.add_argument("map", help="registry map name or PolyMap JSON file")

    simulate = sub.add_parser("simulate", help="integrate an inverse-dynamics experiment")
    simulate.add_argument("experiment", nargs="?", help="registry experiment name")
    simulate.add_argument("--config", metavar="PATH", help="ExperimentConfig JSON (or a list)")
    simulate.add_argument("--out", metavar="PATH", help="CSV path (directory for batches)")
    simulate.add_argument("--step", type=float)
    simulate.add_argument("--max-steps", type=int)
    simulate.add_argument("--stride", type=int)
    simulate.add_argument("--integrator", choices=[i.value for i in IntegratorEnum])
    simulate.add_argument("--workers", type=int, help="process pool size for batches")

    verify = sub.add_parser("verify", help="check an identity on an example")
    verify.add_argument("identity", choices=IDENTITIES)
    verify.add_argument("example", help="registry name, fixture name or fixture JSON file")

    series = sub.add_parser("series", help="series walkthroughs")
    series_sub = series.add_subparsers(dest="series_command", required=True)
    demo = series_sub.add_parser("demo-blowup", help="the worked plane blowup chain")
    demo.add_argument("--order", type=int, help="truncation order of the series")
    demo.add_argument("--no-truncation", action="store_true")
    demo.add_argument("--truncate-at", type=int, metavar="N")

    listing = sub.add_parser("list-examples", help="list registry entries")
    listing.add_argument(
        "--registry", dest="list_registry", metavar="PATH", help="JSON registry file"
    )
    listing.add_argument("--no-builtin", action="store_true")

    return parser


def run(args: argparse.Namespace, commands: CommandService) -> int:
    include_builtin = not getattr(args, "no_builtin", False)
    registry_path = getattr(args, "list_registry", None) or args.registry
    registry = registry_service.build(registry_path, include_builtin)

    if args.command == "check":
        return commands.cmd_check(args.map, registry)
    if args.command == "simulate":
        source = args.config or args.experiment
        if source is None:
            raise ValueError("simulate needs an experiment name or --config PATH")
        return commands.cmd_simulate(
            source,
            registry,
            out=args.out,
            step=args.step,
            max_steps=args.max_steps,
            stride=args.stride,
            integrator=args.integrator,
            workers=args.workers,
        )
    if args.command == "verify":
        return commands.cmd_verify(args.identity, args.example, registry)
    if args.command == "series":
        return commands.cmd_series_demo(
            args.order, not args.no_truncation, args.truncate_at
        )
    return commands.cmd_list(registry)


def main(argv: Optional[List[str]] = None, commands: Optional[CommandService] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT

    try:
        return run(args, commands or command_service)
    except ValidationError as e:
        print(f"error: invalid input: {e.error_count()} validation error(s)", file=sys.stderr)
        log.debug(str(e))
    except (ValueError, OSError) as e:
        # KellerDynamicsError and json decode errors are ValueErrors
        print(f"error: {e}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
