"""
Dilation Commands
cdf, dilation and interval on the dyadic lattice
"""

from __future__ import annotations

import logging
from fractions import Fraction

from src.dilation import big_f, dyadic_increment, f_dyadic, f_via_products, interval_measure
from src.utils.export_data import Report
from src.utils.import_data import parse_dyadic, parse_integer

logger = logging.getLogger(__name__)


def run(args, config) -> Report:
    """Dispatch one of the dilation subcommands"""
    handlers = {
        "cdf": run_cdf,
        "dilation": run_dilation,
        "interval": run_interval,
    }
    return handlers[args.command](args, config)


def run_cdf(args, config) -> Report:
    x = parse_dyadic(args.x, config.depth, "X")
    report = Report("cdf", {"x": x})
    report.add_row(value=big_f(x))
    return report


def run_dilation(args, config) -> Report:
    t = parse_dyadic(args.t, config.depth, "T")
    value = f_dyadic(t)
    report = Report("dilation", {"t": t})
    report.add_row(t=t, f0=value.f0, f1=value.f1)
    report.flags = {"matrix_products_agree": f_via_products(t) == value}
    return report


def run_interval(args, config) -> Report:
    m = parse_integer(args.m, "M")
    k = parse_integer(args.k, "K")
    mass = interval_measure(m, k)
    report = Report("interval", {"m": m, "k": k})
    report.add_row(lower=Fraction(2 * m, 1 << k), upper=Fraction(2 * m + 1, 1 << k), measure=mass)
    report.flags = {
        "matches_distribution": mass == dyadic_increment(2 * m, k),
        "lower_bound": mass >= Fraction(1, 2 * 3 ** k),
    }
    return report
