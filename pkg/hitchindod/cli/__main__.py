# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""HitchinDod command-line interface."""

import argparse
import logging
import sys

import hitchindod
import hitchindod.exc
import hitchindod.harness
import hitchindod.hpoly
import hitchindod.stiefel
from hitchindod.cli import view

_logger = logging.getLogger(__name__)

_FIELD_CHOICES = {
    'r': (hitchindod.stiefel.REAL, ),
    'c': (hitchindod.stiefel.COMPLEX, ),
    'both': (hitchindod.stiefel.REAL, hitchindod.stiefel.COMPLEX),
}


def _positive_int(value):
    """Parse a positive integer argument."""
    try:
        parsed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid integer value: '{value}'") from None
    if parsed < 1:
        raise argparse.ArgumentTypeError(f"value '{value}' is not positive")
    return parsed


def _non_negative_int(value):
    """Parse a non-negative integer argument."""
    try:
        parsed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid integer value: '{value}'") from None
    if parsed < 0:
        raise argparse.ArgumentTypeError(f"value '{value}' is negative")
    return parsed


def _seed(value):
    """Parse a 64-bit unsigned seed."""
    try:
        parsed = int(value, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid seed value: '{value}'") from None
    if not 0 <= parsed < 2**64:
        raise argparse.ArgumentTypeError(
            f"seed '{value}' is not a 64-bit unsigned integer")
    return parsed


def _tolerance(value):
    """Parse a positive finite tolerance."""
    try:
        parsed = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid tolerance value: '{value}'") from None
    if not 0 < parsed < float('inf'):
        raise argparse.ArgumentTypeError(
            f"tolerance '{value}' is not positive and finite")
    return parsed


class _ArgumentParser(argparse.ArgumentParser):
    """Command-line argument parser."""
    def error(self, message):
        """Report a specified error message and exit the program."""
        self.exit(2, f"Input error: {message}\n")


def _build_parser():
    """Create and initialize a command-line parser."""
    parser = _ArgumentParser(
        prog='verify',
        description="verify the domain of discontinuity constructions")
    parser.add_argument('suite',
                        metavar='SUITE',
                        choices=hitchindod.harness.SUITES +
                        (hitchindod.harness.ALL, ),
                        help="suite to run, one of: " +
                        ", ".join(hitchindod.harness.SUITES +
                                  (hitchindod.harness.ALL, )))
    parser.add_argument('--n',
                        type=_positive_int,
                        default=2,
                        help="half-rank of the bundle (the default is 2)")
    parser.add_argument('--field',
                        choices=_FIELD_CHOICES.keys(),
                        default='both',
                        help="field of the cone (the default is both)")
    parser.add_argument(
        '--samples',
        type=_non_negative_int,
        default=hitchindod.harness.DEFAULT_SAMPLES,
        help=f"number of random samples per check (the default is "
        f"{hitchindod.harness.DEFAULT_SAMPLES})")
    parser.add_argument(
        '--seed',
        type=_seed,
        help=f"random seed (the default is taken from "
        f"{hitchindod.harness.SEED_ENVIRONMENT}, else 0)")
    parser.add_argument(
        '--tol-cluster',
        metavar='X',
        type=_tolerance,
        default=hitchindod.hpoly.DEFAULT_TOL_CLUSTER,
        help=f"root clustering tolerance (the default is "
        f"{hitchindod.hpoly.DEFAULT_TOL_CLUSTER})")
    parser.add_argument(
        '--tol-real',
        metavar='X',
        type=_tolerance,
        default=hitchindod.hpoly.DEFAULT_TOL_REAL,
        help=f"real root tolerance (the default is "
        f"{hitchindod.hpoly.DEFAULT_TOL_REAL})")
    parser.add_argument('--report',
                        metavar='PATH',
                        help="write a JSON report to the specified file")
    parser.add_argument('--dump-csv',
                        metavar='PATH',
                        help="write sampled developing-map roots to the "
                        "specified CSV file")
    parser.add_argument('--threads',
                        type=_positive_int,
                        default=1,
                        help="number of worker threads (the default is 1)")
    parser.add_argument('-v',
                        '--verbose',
                        action='count',
                        help="increase verbosity level")
    parser.add_argument('--version',
                        action='version',
                        version=f"%(prog)s {hitchindod.__version__}")
    return parser


def _validate_verify_command(args):
    """Pre-validate command-line options for the verify command."""
    if args.dump_csv is not None and args.suite not in (
            'roots', hitchindod.harness.ALL):
        print(f"Option --dump-csv needs the roots suite, not '{args.suite}'",
              file=sys.stderr)
        return 2
    return 0


def _process_verify_command(args, config):
    """Run the selected suite, print its view and write requested files."""
    report = hitchindod.harness.run(config)
    report.visit_all(view.ReportView())

    try:
        if args.report is not None:
            report.write(args.report)
        if args.dump_csv is not None:
            report.write_csv(args.dump_csv)
    except OSError as e:
        print(f"Failed to write output: {e}", file=sys.stderr)
        return 1

    return 0 if report.passed else 1


def main():
    """
    Run the CLI interface.

    Run the HitchinDod verification command-line interface. Returns 0 if all
    checks passed, 1 if a check failed and 2 on invalid input.
    """
    # Parse the command-line arguments.
    parser = _build_parser()
    try:
        args = parser.parse_args()
    except SystemExit as e:
        return e.code

    res = _validate_verify_command(args)
    if res != 0:
        return res

    # Set desired log verbosity.
    if args.verbose is not None:
        assert args.verbose > 0
        level = ('INFO', 'DEBUG')[min(args.verbose, 2) - 1]
        # Set the level for the root logger.
        logging.getLogger().setLevel(level)
        _logger.info("Log verbosity set to '%s'", level)

    # Resolve the seed and build the configuration, both count as input.
    try:
        seed = hitchindod.harness.resolve_seed(args.seed)
        config = hitchindod.harness.SuiteConfig(
            args.suite,
            n=args.n,
            fields=_FIELD_CHOICES[args.field],
            samples=args.samples,
            seed=seed,
            tol_cluster=args.tol_cluster,
            tol_real=args.tol_real,
            report=args.report,
            dump_csv=args.dump_csv,
            threads=args.threads)
    except hitchindod.exc.SuiteException as e:
        print(f"Input error: {e}", file=sys.stderr)
        return 2

    _logger.debug("Processing suite '%s' with seed '%d'", args.suite, seed)

    try:
        return _process_verify_command(args, config)
    except hitchindod.exc.HitchinDodException as e:
        print(f"Verification failed: {e}", file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
