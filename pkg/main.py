"""
main.py
Main entry point for the qaufbau command line.
"""
import logging
import sys
import argparse
from pathlib import Path
from typing import List, Optional

from config_manager import ConfigManager
from commands import CommandHandler
from exceptions import EvaluationError, InputValidationError, MissingOrbitalError, ReferenceDataError
from ordering import ION, MADELUNG, HYDROGENIC
from utils.output import FORMATS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage code instead of argparse's 2."""
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"error: {message}\n")


def _add_format(parser: argparse.ArgumentParser):
    parser.add_argument('--format', choices=FORMATS, default='table', help='Output format')


def _add_bounds(parser: argparse.ArgumentParser):
    parser.add_argument('--n-max', type=int, default=None,
                        help='Largest principal quantum number (default: the printed series, else 7)')
    parser.add_argument('--l-max', type=int, default=None,
                        help='Largest orbital quantum number (default: the printed series, else 3)')


def build_parser() -> CliArgumentParser:
    """Build the argument parser with one subcommand per handler method."""
    parser = CliArgumentParser(prog='qaufbau', description='q-deformed Aufbau ordering of atomic orbitals')
    parser.add_argument('--config', type=str, default=None, help='Path to config file')
    parser.add_argument('--verbose', action='store_true', help='Log progress to stderr')
    parser.add_argument('--debug', action='store_true', help='Log debugging detail to stderr')
    subparsers = parser.add_subparsers(dest='command', required=True, parser_class=CliArgumentParser)

    energies = subparsers.add_parser('energies', help='Ordering keys and spectral energies per orbital')
    energies.add_argument('--q', type=float, required=True, help='Deformation parameter')
    _add_bounds(energies)
    _add_format(energies)

    order = subparsers.add_parser('order', help='Filling sequence at a deformation')
    order.add_argument('--q', type=float, required=True, help='Deformation parameter')
    _add_bounds(order)
    _add_format(order)

    compare = subparsers.add_parser('compare', help='Compare the sequence with a reference series')
    compare.add_argument('--q', type=float, required=True, help='Deformation parameter')
    compare.add_argument('--reference', type=str, required=True,
                         help=f'Reference series: {MADELUNG}, {ION} or {HYDROGENIC}')
    _add_bounds(compare)
    _add_format(compare)

    scan = subparsers.add_parser('scan', help='Regime profile and level crossings over a q range')
    scan.add_argument('--q-min', type=float, required=True, help='Lower end of the range')
    scan.add_argument('--q-max', type=float, required=True, help='Upper end of the range')
    scan.add_argument('--step', type=float, default=None, help='Grid step (default from config)')
    _add_format(scan)

    config = subparsers.add_parser('config', help='Electron configuration by sequential filling')
    config.add_argument('--z', type=int, required=True, help='Atomic number')
    config.add_argument('--electrons', type=int, default=None, help='Electron count (default: neutral atom)')
    config.add_argument('--q', type=float, required=True, help='Deformation parameter')
    _add_format(config)

    exceptions = subparsers.add_parser('exceptions', help='Elements whose ground state breaks sequential filling')
    source = exceptions.add_mutually_exclusive_group(required=True)
    source.add_argument('--q', type=float, help='Deformation parameter')
    source.add_argument('--reference', type=str, help='Fill in a reference series order instead')
    exceptions.add_argument('--data', type=str, default=None, help='Reference CSV (default from config)')
    _add_format(exceptions)

    novaro = subparsers.add_parser('novaro', help='Constant-alpha windows of the undeformed rotor')
    novaro.add_argument('--alpha-min', type=float, required=True, help='Lower end of the alpha range')
    novaro.add_argument('--alpha-max', type=float, required=True, help='Upper end of the alpha range')
    novaro.add_argument('--step', type=float, default=0.01, help='Alpha grid step')
    _add_format(novaro)

    return parser


def _configure_logging(args: argparse.Namespace):
    level = logging.WARNING
    if args.verbose:
        level = logging.INFO
    if args.debug:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
        force=True
    )


def run_command(handler: CommandHandler, args: argparse.Namespace) -> str:
    """Dispatch parsed arguments to the matching handler method."""
    if args.command == 'energies':
        return handler.energies(args.q, args.n_max, args.l_max, args.format)
    if args.command == 'order':
        return handler.order(args.q, args.n_max, args.l_max, args.format)
    if args.command == 'compare':
        return handler.compare(args.q, args.reference, args.n_max, args.l_max, args.format)
    if args.command == 'scan':
        return handler.scan(args.q_min, args.q_max, args.step, args.format)
    if args.command == 'config':
        return handler.configuration(args.z, args.q, args.electrons, args.format)
    if args.command == 'exceptions':
        return handler.exceptions(args.q, args.data, args.reference, args.format)
    if args.command == 'novaro':
        return handler.novaro(args.alpha_min, args.alpha_max, args.step, args.format)
    raise InputValidationError(f"Unknown command {args.command}")


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    _configure_logging(args)

    try:
        config_manager = ConfigManager(str(Path(args.config)) if args.config else None)
        handler = CommandHandler(config_manager)
        output = run_command(handler, args)
    except ReferenceDataError as e:
        logger.debug("Reference data error", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (InputValidationError, EvaluationError, MissingOrbitalError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        # invalid or unparsable config file
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    print(output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
