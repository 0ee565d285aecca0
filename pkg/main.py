"""
Stern Measure Toolkit
Command-line entry point for the Stern diatomic sequence, its measure, the
Fourier coefficients and the dilation equation

Usage: python main.py [global flags] <command> [arguments]
"""

import argparse
import logging
import sys
import time

from src.commands import (
    dilation_command,
    figure_command,
    fourier_command,
    sequence_command,
    verify_command,
)
from src.config import ToolkitConfig
from src.utils.export_data import write_report

logger = logging.getLogger("stern_measure")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


class ToolkitParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main() owns the exit code"""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = ToolkitParser(prog="stern-measure", description="Stern diatomic measure toolkit")
    parser.add_argument("--tol", type=float, default=1e-10, help="tail tolerance of the Fourier product")
    parser.add_argument("--depth", type=int, default=24, help="minimum product depth and dyadic snapping level")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default all CPUs)")
    parser.add_argument("--grid", type=int, default=10_000, help="uniform grid size for scans and figure 1")
    parser.add_argument("--timing", action="store_true", help="include wall time in the output")
    parser.add_argument("--verbose", action="store_true", help="INFO logging on stderr")

    commands = parser.add_subparsers(dest="command", required=True, parser_class=ToolkitParser)

    stern = commands.add_parser("stern", help="s(N)")
    stern.add_argument("n")
    stern.add_argument("--jsr", type=int, default=None, metavar="LEN",
                       help="also report the joint spectral radius over products of length <= LEN")
    commands.add_parser("sum", help="summatory function at X").add_argument("x")
    commands.add_parser("weights", help="atoms of the level-N approximant").add_argument("n")

    fourier = commands.add_parser("fourier", help="Fourier coefficient at K")
    fourier.add_argument("k")
    fourier.add_argument("--real", action="store_true", help="treat K as a real frequency")

    commands.add_parser("cdf", help="distribution function F at a dyadic X").add_argument("x")
    commands.add_parser("dilation", help="(f0, f1) at a dyadic T").add_argument("t")

    interval = commands.add_parser("interval", help="mass of [2M/2^K, (2M+1)/2^K]")
    interval.add_argument("m")
    interval.add_argument("k")

    commands.add_parser("wiener", help="averaged squared coefficients up to 2^NMAX").add_argument("nmax")
    commands.add_parser("scan", help="ratio of the extremal |mu_hat| on [3/5, 1] and [0, 2/5]")
    commands.add_parser("appendix", help="coefficient inequalities and the doubling bound")
    commands.add_parser("moments", help="Jessen-Wintner moments")
    commands.add_parser("figure", help="data behind figure 1, 2 or 3").add_argument("which")

    verify = commands.add_parser("verify", help="run the acceptance suite")
    verify.add_argument("--quick", action="store_true", help="reduced sizes")
    return parser


COMMANDS = {
    "stern": sequence_command,
    "sum": sequence_command,
    "weights": sequence_command,
    "fourier": fourier_command,
    "wiener": fourier_command,
    "scan": fourier_command,
    "appendix": fourier_command,
    "moments": fourier_command,
    "cdf": dilation_command,
    "dilation": dilation_command,
    "interval": dilation_command,
    "figure": figure_command,
    "verify": verify_command,
}


def configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv=None) -> int:
    """Run one command; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        configure_logging(False)
        logger.error(f"Usage error: {exc}")
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    configure_logging(args.verbose)
    try:
        config = ToolkitConfig.from_args(args)
        started = time.perf_counter()
        report = COMMANDS[args.command].run(args, config)
        report.wall_time = time.perf_counter() - started
        write_report(report, config.fmt, config.out, config.timing)
    except ValueError as exc:
        logger.error(f"Invalid input: {exc}")
        return EXIT_USAGE
    except Exception:
        logger.exception(f"{args.command} failed")
        return EXIT_FAILED

    if args.command == "verify" and not report.passed():
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
