"""
Acceptance Suite
The fifteen end-to-end checks behind `verify`, each at full size or, with
quick=True, at reduced size for smoke runs.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from src import dilation, fourier, stern, wiener
from src.fourier import FourierSettings

logger = logging.getLogger(__name__)

MU_HAT_ONE = -0.083432
MU_HAT_TWO_FIFTHS = 0.450342617
ARGMAX_UPPER = 0.877996139
MAX_UPPER = 0.105423890


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Sizes:
    """Problem sizes for one run of the suite"""

    sequence_max: int = 10 ** 6
    block_max: int = 18
    oracle_level: int = 12
    oracle_k: int = 256
    scaling_grid: int = 10_000
    doubling_k: int = 1 << 15
    wiener_sublinear: int = 18
    wiener_geometric: int = 20
    exact_level: int = 12
    interval_level: int = 10
    increase_level: int = 12
    holder_levels: tuple = (10, 14)
    summatory_max: int = 1 << 20
    appendix_k: int = 4096
    appendix_n: int = 1 << 16
    weak_level: int = 20
    figure_level: int = 12


FULL = Sizes()
QUICK = Sizes(
    sequence_max=10 ** 4,
    block_max=12,
    oracle_level=8,
    oracle_k=64,
    scaling_grid=1000,
    doubling_k=1 << 10,
    wiener_sublinear=12,
    wiener_geometric=12,
    exact_level=8,
    interval_level=6,
    increase_level=8,
    holder_levels=(8, 10),
    summatory_max=1 << 14,
    appendix_k=512,
    appendix_n=1 << 12,
    weak_level=14,
    figure_level=8,
)


def check_sequence_equivalence(sizes: Sizes, settings, grid, threads) -> CheckResult:
    ns = np.arange(1, sizes.sequence_max + 1, dtype=np.int64)
    reference = np.array(stern.stern_sequence(sizes.sequence_max)[1:], dtype=np.int64)
    batch_ok = bool(np.array_equal(stern.stern_matrix_batch(ns), reference))

    # the scalar product and the recursion on 200 random n plus 16 per octave
    rng = np.random.default_rng(2017)
    samples = {int(n) for n in rng.integers(1, sizes.sequence_max + 1, size=200)}
    for j in range(sizes.sequence_max.bit_length()):
        top = min(2 << j, sizes.sequence_max + 1)
        samples.update(int(n) for n in rng.integers(1 << j, top, size=16))
    scalar_ok = all(
        stern.stern_matrix(n) == stern.stern_recursive(n) == int(reference[n - 1]) for n in sorted(samples)
    )

    jsr = stern.jsr_estimate(12)
    jsr_ok = abs(jsr - stern.GOLDEN_RATIO) <= 1e-12 and stern.jsr_witness(12) == "01"
    return CheckResult(1, "sequence equivalence", batch_ok and scalar_ok and jsr_ok, {
        "batch_n_max": sizes.sequence_max,
        "scalar_samples": len(samples),
        "jsr": jsr,
    })


def check_block_sums(sizes: Sizes, settings, grid, threads) -> CheckResult:
    bad = [n for n in range(sizes.block_max + 1) if stern.block_sum(n) != 3 ** n]
    return CheckResult(2, "block sums", not bad, {"n_max": sizes.block_max, "failures": len(bad)})


def check_fourier_oracle(sizes: Sizes, settings, grid, threads) -> CheckResult:
    rng = np.random.default_rng(2017)
    ks = [float(k) for k in range(-sizes.oracle_k, sizes.oracle_k + 1)]
    ks += [float(k) for k in rng.uniform(0.0, 8.0, size=64)]

    worst = 0.0
    for n in range(sizes.oracle_level + 1):
        for k in ks:
            gap = abs(fourier.mu_hat_level(n, k) - fourier.mu_hat_level_direct(n, k))
            worst = max(worst, gap)
    return CheckResult(3, "fourier oracle", worst < 1e-10, {"worst_gap": worst})


def check_mu_hat_one(sizes: Sizes, settings, grid, threads) -> CheckResult:
    value = fourier.mu_hat(1, settings)
    return CheckResult(4, "mu_hat(1) anchor", abs(value - MU_HAT_ONE) <= 5e-7, {"mu_hat_1": value})


def check_ratio_anchors(sizes: Sizes, settings, grid, threads) -> CheckResult:
    bound = wiener.ratio_bound_check(settings, grid)
    at_two_fifths = abs(fourier.mu_hat(0.4, settings))
    passed = (
        abs(at_two_fifths - MU_HAT_TWO_FIFTHS) <= 1e-8
        and abs(bound.argmax - ARGMAX_UPPER) <= 1e-6
        and abs(bound.numerator - MAX_UPPER) <= 1e-7
        and bound.ratio <= 0.25 - 0.01
    )
    return CheckResult(5, "ratio anchors", passed, {
        "abs_mu_hat_2_5": at_two_fifths,
        "argmax": bound.argmax,
        "max": bound.numerator,
        "ratio": bound.ratio,
    })


def check_scaling(sizes: Sizes, settings, grid, threads) -> CheckResult:
    ks = np.linspace(-4.0, 4.0, sizes.scaling_grid)
    factor = (1.0 + 2.0 * np.cos(fourier.TAU_2PI * ks)) / 3.0
    residual = np.abs(fourier.mu_hat_array(2.0 * ks, settings) - factor * fourier.mu_hat_array(ks, settings))
    worst = float(residual.max())
    integer_ok = all(
        fourier.mu_hat_int(2 * k, settings) == fourier.mu_hat_int(k, settings)
        for k in range(1, sizes.doubling_k + 1)
    )
    symmetry = fourier.doubling_symmetry_check(10)
    ratio_gap = wiener.ratio_identity_check(10, settings=settings)
    estimate_ok = all(wiener.reflection_estimate_check(10, settings=settings))
    errors = fourier.level_refinement_errors(1.0, settings=settings)
    refines = all(b <= a for a, b in zip(errors, errors[1:]))
    passed = (
        worst <= 4e-10
        and integer_ok
        and symmetry <= 1e-10
        and ratio_gap <= 1e-9
        and estimate_ok
        and refines
    )
    return CheckResult(6, "scaling lemma", passed, {
        "worst_residual": worst,
        "symmetry_error": symmetry,
        "ratio_identity_gap": ratio_gap,
        "reflection_estimate": estimate_ok,
        "refinement_error_20": errors[-1],
    })


def check_wiener_decay(sizes: Sizes, settings, grid, threads) -> CheckResult:
    series = wiener.wiener_series(sizes.wiener_geometric, settings, threads)
    sublinear = wiener.check_sublinear(series)[: sizes.wiener_sublinear - 1]
    geometric = wiener.geometric_bound_check(series)
    return CheckResult(7, "wiener decay", all(sublinear) and all(geometric), {
        "sigma_last": series.sigma[-1],
        "sublinear_failures": sublinear.count(False),
        "geometric_failures": geometric.count(False),
    })


def check_dilation_exactness(sizes: Sizes, settings, grid, threads) -> CheckResult:
    half_ok = dilation.f_dyadic(Fraction(1, 2)) == dilation.FValue(Fraction(1, 6), Fraction(1, 3))
    try:
        # big_f raises when its two closed forms disagree
        for j in range((1 << sizes.exact_level) + 1):
            dilation.big_f(Fraction(j, 1 << sizes.exact_level))
        identity_ok = True
    except ArithmeticError as exc:
        logger.error(f"Distribution identity failed: {exc}")
        identity_ok = False
    anchors = {
        Fraction(1, 4): Fraction(2, 9),
        Fraction(1, 2): Fraction(1, 2),
        Fraction(3, 4): Fraction(7, 9),
    }
    anchors_ok = all(dilation.big_f(x) == value for x, value in anchors.items())
    return CheckResult(8, "dilation exactness", half_ok and identity_ok and anchors_ok, {
        "f_half": half_ok,
        "identity": identity_ok,
        "anchors": anchors_ok,
    })


def check_interval_formula(sizes: Sizes, settings, grid, threads) -> CheckResult:
    formula_ok = True
    for k in range(1, sizes.interval_level + 1):
        floor = Fraction(1, 2 * 3 ** k)
        for m in range(1 << (k - 1)):
            mass = dilation.interval_measure(m, k)
            if mass != dilation.dyadic_increment(2 * m, k) or mass < floor:
                formula_ok = False
                break
    partition_ok = all(sum(dilation.big_f_partition(k)) == 1 for k in range(sizes.interval_level + 1))
    return CheckResult(9, "interval measure formula", formula_ok and partition_ok, {
        "formula": formula_ok,
        "partition": partition_ok,
    })


def check_strict_increase(sizes: Sizes, settings, grid, threads) -> CheckResult:
    passed = dilation.strict_increase_check(sizes.increase_level)
    return CheckResult(10, "strict increase", passed, {"level": sizes.increase_level})


def check_holder(sizes: Sizes, settings, grid, threads) -> CheckResult:
    low, high = sizes.holder_levels
    coarse = dilation.holder_estimate(low)
    fine = dilation.holder_estimate(high)
    stability = fine.c_hat / coarse.c_hat
    passed = 0.85 <= fine.alpha_hat <= 0.95 and 1 / 1.5 <= stability <= 1.5
    return CheckResult(11, "holder exponent", passed, {
        "alpha_hat": fine.alpha_hat,
        "c_hat": fine.c_hat,
        "c_ratio": stability,
    })


def check_summatory(sizes: Sizes, settings, grid, threads) -> CheckResult:
    profile = stern.residual_profile(sizes.summatory_max)
    rows = profile["rows"]
    split = sizes.summatory_max.bit_length() // 2
    lower = max(row["scaled"] for row in rows if row["x"].bit_length() <= split)
    upper = max(row["scaled"] for row in rows if row["x"].bit_length() > split)
    return CheckResult(12, "summatory asymptotics", upper <= 2.0 * lower, {
        "scaled_lower": lower,
        "scaled_upper": upper,
        "exponent": profile["exponent"],
    })


def check_appendix(sizes: Sizes, settings, grid, threads) -> CheckResult:
    slack = wiener.appendix_inequalities(sizes.appendix_k, settings, threads)
    worst_doubling = wiener.doubling_all(sizes.appendix_n, settings, threads)
    moments_ok = wiener.jw_identity_check(wiener.jw_moments(2, 32))
    passed = (
        slack.worst_slack_2 <= 1e-9
        and worst_doubling <= 1.5 + 1e-9
        and moments_ok
    )
    return CheckResult(13, "appendix", passed, {
        "worst_slack_1": slack.worst_slack_1,
        "worst_k_1": slack.worst_k_1,
        "violations_1": slack.violations_1,
        "worst_slack_2": slack.worst_slack_2,
        "worst_doubling": worst_doubling,
        "moments": moments_ok,
    })


def check_weak_convergence(sizes: Sizes, settings, grid, threads) -> CheckResult:
    target = Fraction(2, 9)
    # the atom at 1/4 dominates level 1, so the gap shrinks from level 2 on
    masses = wiener.approximant_interval_masses(0, Fraction(1, 4), range(2, sizes.weak_level + 1))
    gaps = [abs(mass - target) for _, mass in masses]
    decreasing = all(b < a for a, b in zip(gaps, gaps[1:]))
    last = float(gaps[-1])
    return CheckResult(14, "weak convergence", decreasing and last < 1e-3, {"last_gap": last})


def check_figures(sizes: Sizes, settings, grid, threads) -> CheckResult:
    level = sizes.figure_level
    values = dilation.big_f_grid(level)
    monotone = all(a <= b for a, b in zip(values, values[1:]))
    ordered = dilation.monotone_check(level)

    kappa = np.linspace(0.0, 1.0, grid)
    profile = np.abs(fourier.mu_hat_array(kappa, settings))
    middle = (kappa >= 0.4) & (kappa <= 0.8)
    dip = float(kappa[middle][np.argmin(profile[middle])])
    upper = kappa >= 0.6
    bump = float(kappa[upper][np.argmax(profile[upper])])
    passed = monotone and ordered and 0.5 <= dip <= 0.7 and abs(bump - 0.88) <= 0.01
    return CheckResult(15, "figure data", passed, {"dip": dip, "bump": bump})


CHECKS = (
    check_sequence_equivalence,
    check_block_sums,
    check_fourier_oracle,
    check_mu_hat_one,
    check_ratio_anchors,
    check_scaling,
    check_wiener_decay,
    check_dilation_exactness,
    check_interval_formula,
    check_strict_increase,
    check_holder,
    check_summatory,
    check_appendix,
    check_weak_convergence,
    check_figures,
)


def run_suite(settings: FourierSettings, grid: int = 10_000, threads: int | None = None,
              quick: bool = False) -> list[CheckResult]:
    """Run every check in order; a crashing check counts as a failure"""
    sizes = QUICK if quick else FULL
    results = []
    for check in CHECKS:
        started = time.perf_counter()
        try:
            result = check(sizes, settings, grid, threads)
        except (ValueError, ArithmeticError) as exc:
            logger.error(f"{check.__name__} raised {exc}")
            number = CHECKS.index(check) + 1
            result = CheckResult(number, check.__name__.removeprefix("check_").replace("_", " "), False,
                                 {"error": str(exc)})
        status = "ok" if result.passed else "FAILED"
        logger.info(f"[{result.number:2d}] {result.name}: {status} in {time.perf_counter() - started:.2f}s")
        if not result.passed:
            logger.warning(f"Acceptance check {result.number} ({result.name}) failed: {result.details}")
        results.append(result)
    return results


def format_details(details: dict) -> str:
    """key=value pairs; floats at 12 significant digits"""
    parts = []
    for key, value in details.items():
        if isinstance(value, float) and not math.isnan(value):
            value = f"{value:.12g}"
        elif isinstance(value, bool):
            value = "true" if value else "false"
        parts.append(f"{key}={value}")
    return ";".join(parts)
