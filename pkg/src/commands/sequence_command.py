"""
Sequence Commands
stern, sum and weights: the Stern sequence, its summatory function and the
weights of the level-n approximant
"""

from __future__ import annotations

import logging

from src.fourier import level_measure
from src.stern import (
    asymptotic_argument,
    jsr_estimate,
    jsr_witness,
    stern_matrix,
    stern_recursive,
    summatory,
    summatory_asymptotic,
    summatory_asymptotic_exact,
)
from src.utils.export_data import Report
from src.utils.import_data import is_dyadic, parse_integer, parse_rational

logger = logging.getLogger(__name__)


def run(args, config) -> Report:
    """Dispatch one of the sequence subcommands"""
    handlers = {
        "stern": run_stern,
        "sum": run_sum,
        "weights": run_weights,
    }
    return handlers[args.command](args, config)


def run_stern(args, config) -> Report:
    n = parse_integer(args.n, "N")
    if n < 0:
        raise ValueError(f"N must be nonnegative, got {n}")
    # s(0) = 0 has no binary digits to multiply over
    value = stern_matrix(n) if n > 0 else stern_recursive(0)
    report = Report("stern", {"n": n})
    if args.jsr is None:
        report.add_row(value=value)
    else:
        report.parameters["jsr_length"] = args.jsr
        report.add_row(value=value, jsr=jsr_estimate(args.jsr), witness=jsr_witness(args.jsr))
    return report


def run_sum(args, config) -> Report:
    x = parse_rational(args.x, "X")
    exact = summatory(x)
    _, t = asymptotic_argument(x)
    if is_dyadic(t):
        main = summatory_asymptotic_exact(x)
    else:
        logger.info(f"x / 2^(n+1) = {t} is not dyadic; main term taken at float(x)")
        main = summatory_asymptotic(x)
    report = Report("sum", {"x": x})
    report.add_row(x=x, summatory=exact, asymptotic=float(main), residual=float(exact - main))
    return report


def run_weights(args, config) -> Report:
    n = parse_integer(args.n, "N")
    measure = level_measure(n)
    report = Report("weights", {"n": n})
    for x, weight in zip(measure.support(), measure.weights):
        report.add_row(x=x, weight=weight)
    logger.info(f"Level {n} measure with {len(measure.weights)} atoms, total {measure.total()}")
    return report
