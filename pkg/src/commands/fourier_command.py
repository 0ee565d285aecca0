"""
Fourier Commands
fourier, wiener, scan, appendix and moments
"""

from __future__ import annotations

import logging

from src.fourier import mu_hat, mu_hat_int, truncation_depth
from src.utils.export_data import Report
from src.utils.import_data import parse_integer, parse_rational
from src.wiener import (
    DOUBLING_ALPHA,
    appendix_doubling,
    appendix_inequalities,
    appendix_series,
    check_sublinear,
    check_two_step,
    doubling_power_bound,
    empirical_alpha,
    geometric_bound_check,
    jw_identity_check,
    jw_moments,
    jw_partial_sums,
    ratio_bound_check,
    wiener_series,
)

logger = logging.getLogger(__name__)

APPENDIX_K_MAX = 4096
APPENDIX_N_MAX = 1 << 16


def run(args, config) -> Report:
    """Dispatch one of the Fourier subcommands"""
    handlers = {
        "fourier": run_fourier,
        "wiener": run_wiener,
        "scan": run_scan,
        "appendix": run_appendix,
        "moments": run_moments,
    }
    return handlers[args.command](args, config)


def _settings_parameters(config) -> dict:
    return {"tol": config.tol, "depth": config.depth}


def run_fourier(args, config) -> Report:
    settings = config.fourier_settings()
    k = parse_rational(args.k, "K")
    if args.real or k.denominator != 1:
        value = mu_hat(float(k), settings)
    else:
        value = mu_hat_int(int(k), settings)

    report = Report("fourier", {"k": k, "real": bool(args.real), **_settings_parameters(config)})
    report.add_row(value=value)
    logger.info(f"mu_hat({k}) with {truncation_depth(float(k), settings)} factors")
    return report


def run_wiener(args, config) -> Report:
    n_max = parse_integer(args.nmax, "NMAX")
    series = wiener_series(n_max, config.fourier_settings(), config.threads)

    report = Report("wiener", {"nmax": n_max, **_settings_parameters(config)})
    sublinear = check_sublinear(series) if n_max >= 2 else []
    two_step = check_two_step(series) if n_max >= 2 else []
    geometric = geometric_bound_check(series) if n_max >= 2 else []
    for n, sigma in enumerate(series.sigma):
        row = {"N": n, "sigma": sigma, "sublinear": True, "two_step": True, "geometric": True}
        if n >= 2:
            row.update(sublinear=sublinear[n - 2], two_step=two_step[n - 2], geometric=geometric[n - 2])
        report.add_row(**row)

    report.flags = {
        "sublinear": all(sublinear),
        "two_step": all(two_step),
        "geometric": all(geometric),
    }
    return report


def run_scan(args, config) -> Report:
    bound = ratio_bound_check(config.fourier_settings(), config.grid)
    report = Report("scan", {"grid": config.grid, **_settings_parameters(config)})
    report.add_row(
        ratio=bound.ratio,
        numerator=bound.numerator,
        argmax=bound.argmax,
        denominator=bound.denominator,
        argmin=bound.argmin,
    )
    report.flags = {"ratio_below_quarter": bound.ratio < 0.25}
    return report


def run_appendix(args, config) -> Report:
    settings = config.fourier_settings()
    slack = appendix_inequalities(APPENDIX_K_MAX, settings, config.threads)
    ratios = appendix_doubling(APPENDIX_N_MAX, settings, config.threads)
    series = appendix_series(APPENDIX_N_MAX, settings, config.threads)
    alpha = empirical_alpha(series)

    report = Report("appendix", {"k_max": APPENDIX_K_MAX, "n_max": APPENDIX_N_MAX, **_settings_parameters(config)})
    for j, ratio in enumerate(ratios):
        report.add_row(N=1 << j, sigma_2N=series.value(2 << j), doubling_ratio=ratio)

    report.parameters.update(
        worst_slack_1=slack.worst_slack_1,
        worst_k_1=slack.worst_k_1,
        violations_1=slack.violations_1,
        worst_slack_2=slack.worst_slack_2,
        empirical_alpha=alpha,
        alpha_bound=DOUBLING_ALPHA,
    )
    report.flags = {
        "inequality_2": slack.worst_slack_2 <= 1e-9,
        "doubling": all(ratio <= 1.5 + 1e-9 for ratio in ratios),
        "power_bound": all(doubling_power_bound(series)),
    }
    return report


def run_moments(args, config) -> Report:
    table = jw_moments()
    report = Report("moments", {"r_max": 8, "m_max": 32})
    sums = {row["m"]: row for row in jw_partial_sums()}
    for entry in table:
        partial = {1: "sum_abs_m1", 2: "sum_m2"}.get(entry.r)
        report.add_row(
            r=entry.r,
            m=entry.m,
            moment=entry.value,
            partial_sum=sums[entry.m][partial] if partial else "",
        )
    report.flags = {"identities": jw_identity_check(table)}
    return report
