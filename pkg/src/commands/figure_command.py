"""
Figure Data
Tables behind the three plots: |mu_hat| on [0, 1], the distribution
function F and the pair f0 <= f1
"""

from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np

from src.dilation import big_f_grid, f_dyadic
from src.fourier import mu_hat_array
from src.utils.export_data import Report
from src.utils.import_data import parse_integer

logger = logging.getLogger(__name__)


def run(args, config) -> Report:
    which = parse_integer(args.which, "figure")
    builders = {1: fourier_profile, 2: distribution_function, 3: dilation_pair}
    if which not in builders:
        raise ValueError(f"figure must be 1, 2 or 3, got {which}")
    return builders[which](config)


def fourier_profile(config) -> Report:
    kappa = np.linspace(0.0, 1.0, config.grid)
    values = np.abs(mu_hat_array(kappa, config.fourier_settings()))
    report = Report("figure", {"figure": 1, "grid": config.grid, "tol": config.tol, "depth": config.depth})
    for k, value in zip(kappa, values):
        report.add_row(kappa=float(k), abs_mu_hat=float(value))
    return report


def distribution_function(config) -> Report:
    level = config.figure_level
    report = Report("figure", {"figure": 2, "level": level})
    for j, value in enumerate(big_f_grid(level)):
        report.add_row(x=Fraction(j, 1 << level), F=value)
    logger.info(f"Distribution function on {(1 << level) + 1} dyadics")
    return report


def dilation_pair(config) -> Report:
    level = config.figure_level
    report = Report("figure", {"figure": 3, "level": level})
    for j in range((1 << level) + 1):
        t = Fraction(j, 1 << level)
        value = f_dyadic(t)
        report.add_row(t=t, f0=value.f0, f1=value.f1)
    return report
