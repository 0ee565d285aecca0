"""
Wiener Criterion Checks
Averaged squared Fourier coefficients, the quantitative inequalities behind
the continuity argument, the doubling estimate, Jessen-Wintner moments and
atoms of the approximants.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from src.fourier import (
    DEFAULT_SETTINGS,
    FourierSettings,
    level_interval_mass,
    mu_hat,
    mu_hat_array,
    mu_hat_int_array,
    mu_hat_odd_table,
)
from src.stern import iter_stern, stern_recursive

logger = logging.getLogger(__name__)

# Block length for the deterministic two-stage sums
SUM_BLOCK = 1 << 12
INEQUALITY_TOL = 1e-9
DOUBLING_ALPHA = math.log2(1.5)
MAX_WIENER_EXPONENT = 20


def stable_sum(values: np.ndarray) -> float:
    """Fixed-size block sums combined with fsum; independent of threading"""
    return math.fsum(float(np.sum(values[i:i + SUM_BLOCK])) for i in range(0, values.size, SUM_BLOCK))


@dataclass(frozen=True)
class WienerSeries:
    """Sigma_N = 2^-N sum_{k=0}^{2^N} |mu_hat(k)|^2 for N = 0..max_exponent"""

    max_exponent: int
    sigma: tuple
    settings: FourierSettings = DEFAULT_SETTINGS

    def at(self, n: int) -> float:
        # Sigma_{-1} := 0
        return 0.0 if n < 0 else self.sigma[n]


def _square_table(k_max: int, settings: FourierSettings, threads: int | None) -> np.ndarray:
    table = mu_hat_odd_table(k_max, settings, threads)
    return mu_hat_int_array(np.arange(k_max + 1, dtype=np.int64), table) ** 2


def wiener_series(n_max: int, settings: FourierSettings = DEFAULT_SETTINGS,
                  threads: int | None = None) -> WienerSeries:
    """Sigma_N for N = 0..n_max, endpoint k = 2^N included"""
    if n_max < 0 or n_max > MAX_WIENER_EXPONENT:
        raise ValueError(f"wiener_series needs 0 <= n_max <= {MAX_WIENER_EXPONENT}, got {n_max}")

    started = time.perf_counter()
    squares = _square_table(1 << n_max, settings, threads)
    sigma = tuple(stable_sum(squares[: (1 << n) + 1]) / (1 << n) for n in range(n_max + 1))
    logger.info(f"Wiener series to N={n_max} in {time.perf_counter() - started:.2f}s")
    return WienerSeries(n_max, sigma, settings)


def sigma_grouped(series: WienerSeries, threads: int | None = None) -> list[float]:
    """Sigma_N from odd parts: mu_hat(j)^2 counted once per 2^a j <= 2^N"""
    n_max = series.max_exponent
    table = mu_hat_odd_table(1 << n_max, series.settings, threads)
    odd = np.arange(1, (1 << n_max) + 1, 2, dtype=np.int64)
    # ceil(log2 j) for odd j
    ceil_log = np.array([int(j - 1).bit_length() for j in odd], dtype=np.int64)

    result = []
    for n in range(n_max + 1):
        count = (1 << (n - 1)) if n > 0 else 1
        multiplicity = n - ceil_log[:count] + 1
        result.append((1.0 + stable_sum(table[:count] ** 2 * multiplicity)) / (1 << n))
    return result


def check_sublinear(series: WienerSeries) -> list[bool]:
    """Sigma_N < Sigma_{N-1} - (15/64) Sigma_{N-2} for N = 2..max"""
    if series.max_exponent < 2:
        raise ValueError("check_sublinear needs a series with max_exponent >= 2")
    return [
        series.at(n) < series.at(n - 1) - 15.0 / 64.0 * series.at(n - 2)
        for n in range(2, series.max_exponent + 1)
    ]


def check_two_step(series: WienerSeries) -> list[bool]:
    """Sigma_N < (49/64) Sigma_{N-2} for N = 2..max"""
    return [series.at(n) < 49.0 / 64.0 * series.at(n - 2) for n in range(2, series.max_exponent + 1)]


def geometric_bound_check(series: WienerSeries) -> list[bool]:
    """Sigma_N <= (7/8)^(N-1) max(Sigma_0, Sigma_1) for N = 2..max"""
    top = max(series.at(0), series.at(1))
    return [series.at(n) <= (7.0 / 8.0) ** (n - 1) * top for n in range(2, series.max_exponent + 1)]


class RatioBound(NamedTuple):
    ratio: float
    numerator: float
    argmax: float
    denominator: float
    argmin: float


def _refine(objective, xs: np.ndarray, i: int) -> float:
    """Golden-section search inside the grid cells around xs[i]"""
    if i == 0 or i == xs.size - 1:
        return float(xs[i])
    try:
        found = minimize_scalar(objective, bracket=(xs[i - 1], xs[i], xs[i + 1]),
                                method="golden", tol=1e-10)
    except ValueError:
        # flat neighbourhood: the grid value stands
        return float(xs[i])
    return float(found.x)


def ratio_bound_check(settings: FourierSettings = DEFAULT_SETTINGS, grid: int = 10_000) -> RatioBound:
    """max_{[3/5, 1]} |mu_hat| over min_{[0, 2/5]} |mu_hat|; below 1/4"""
    if grid < 1000:
        raise ValueError(f"ratio_bound_check needs grid >= 1000, got {grid}")

    def magnitude(t):
        return abs(mu_hat(t, settings))

    upper = np.linspace(0.6, 1.0, grid)
    top = _refine(lambda t: -magnitude(t), upper, int(np.argmax(np.abs(mu_hat_array(upper, settings)))))

    lower = np.linspace(0.0, 0.4, grid)
    bottom = _refine(magnitude, lower, int(np.argmin(np.abs(mu_hat_array(lower, settings)))))

    numerator, denominator = magnitude(top), magnitude(bottom)
    ratio = numerator / denominator
    logger.info(f"Ratio bound {ratio:.6f} (max {numerator:.9f} at {top:.9f}, min {denominator:.9f} at {bottom:.9f})")
    return RatioBound(ratio, numerator, top, denominator, bottom)


def integer_reflection_check(n_max: int, settings: FourierSettings = DEFAULT_SETTINGS,
                             threads: int | None = None) -> list[bool]:
    """|mu_hat(2^N - k)| <= |mu_hat(k)| for 0 <= k <= 2^(N-1), N = 1..n_max"""
    magnitudes = np.sqrt(_square_table(1 << n_max, settings, threads))
    result = []
    for n in range(1, n_max + 1):
        ks = np.arange(0, (1 << (n - 1)) + 1)
        result.append(bool(np.all(magnitudes[(1 << n) - ks] <= magnitudes[ks] + INEQUALITY_TOL)))
    return result


def ratio_identity_check(n_max: int = 10, grid: int = 1000,
                         settings: FourierSettings = DEFAULT_SETTINGS) -> float:
    """
    Worst gap in mu_hat(2^N (1-t)) / mu_hat(2^N t) = mu_hat(1-t) / mu_hat(t)
    over N <= n_max and a grid of t in (0, 1/2].

    Compared cross-multiplied, where both denominators exceed INEQUALITY_TOL.
    """
    if n_max < 0 or n_max > 20:
        raise ValueError(f"ratio_identity_check needs 0 <= n_max <= 20, got {n_max}")
    kappas = np.linspace(0.5 / grid, 0.5, grid)
    base = mu_hat_array(kappas, settings)
    mirror = mu_hat_array(1.0 - kappas, settings)

    worst = 0.0
    for n in range(n_max + 1):
        scaled = mu_hat_array(np.ldexp(kappas, n), settings)
        scaled_mirror = mu_hat_array(np.ldexp(1.0 - kappas, n), settings)
        usable = (np.abs(base) > INEQUALITY_TOL) & (np.abs(scaled) > INEQUALITY_TOL)
        if not usable.any():
            continue
        gap = np.abs(scaled_mirror * base - mirror * scaled)[usable]
        worst = max(worst, float(gap.max()))
    logger.info(f"Ratio identity worst cross-multiplied gap {worst:.3e} for N <= {n_max}")
    return worst


def reflection_estimate_check(n_max: int = 10, grid: int = 1001,
                              settings: FourierSettings = DEFAULT_SETTINGS) -> list[bool]:
    """|mu_hat(2^N (1-t))| <= |mu_hat(2^N t)| on a grid of t in [0, 1/2], N = 0..n_max"""
    if n_max < 0 or n_max > 20:
        raise ValueError(f"reflection_estimate_check needs 0 <= n_max <= 20, got {n_max}")
    kappas = np.linspace(0.0, 0.5, grid)
    result = []
    for n in range(n_max + 1):
        near = np.abs(mu_hat_array(np.ldexp(kappas, n), settings))
        far = np.abs(mu_hat_array(np.ldexp(1.0 - kappas, n), settings))
        result.append(bool(np.all(far <= near + INEQUALITY_TOL)))
    return result


class AppendixSlack(NamedTuple):
    worst_slack_1: float
    worst_slack_2: float
    worst_k_1: int
    worst_k_2: int
    # count of k with slack_1 > INEQUALITY_TOL; k = 83 is one of them
    violations_1: int = 0


def appendix_inequalities(k_max: int, settings: FourierSettings = DEFAULT_SETTINGS,
                          threads: int | None = None) -> AppendixSlack:
    """
    Worst slacks of |mu_hat(2k+1)| <= |mu_hat(k) + mu_hat(k+1)| / 2 and
    mu_hat(2k+1) (mu_hat(2k) + mu_hat(2k+2)) <= 0 over |k| <= k_max.
    """
    if k_max < 0 or k_max > 100_000:
        raise ValueError(f"appendix_inequalities needs 0 <= k_max <= 1e5, got {k_max}")

    table = mu_hat_odd_table(2 * k_max + 2, settings, threads)
    ks = np.arange(-k_max, k_max + 1, dtype=np.int64)

    def coeff(values):
        return mu_hat_int_array(values, table)

    odd = coeff(2 * ks + 1)
    slack_1 = np.abs(odd) - 0.5 * np.abs(coeff(ks) + coeff(ks + 1))
    slack_2 = odd * (coeff(2 * ks) + coeff(2 * ks + 2))

    i1, i2 = int(np.argmax(slack_1)), int(np.argmax(slack_2))
    violations = int(np.count_nonzero(slack_1 > INEQUALITY_TOL))
    if violations:
        logger.info(f"|mu_hat(2k+1)| <= |mu_hat(k) + mu_hat(k+1)| / 2 fails at {violations} k, worst k = {int(ks[i1])}")
    return AppendixSlack(float(slack_1[i1]), float(slack_2[i2]), int(ks[i1]), int(ks[i2]), violations)


@dataclass(frozen=True)
class AppendixSeries:
    """Sigma(N) = sum_{k=-N}^{N} mu_hat(k)^2 at N = 1, 2, 4, ..."""

    points: tuple
    values: tuple

    def value(self, n: int) -> float:
        return self.values[self.points.index(n)]


def _appendix_prefix(n_max: int, settings: FourierSettings, threads: int | None) -> np.ndarray:
    """Sigma(N) for every N = 0..n_max"""
    if n_max < 1 or n_max > 1 << 16:
        raise ValueError(f"appendix checks need 1 <= n_max <= 2^16, got {n_max}")
    squares = _square_table(n_max, settings, threads)
    squares[0] = 0.0
    return 1.0 + 2.0 * np.cumsum(squares)


def appendix_series(n_max: int, settings: FourierSettings = DEFAULT_SETTINGS,
                    threads: int | None = None) -> AppendixSeries:
    prefix = _appendix_prefix(n_max, settings, threads)
    points = tuple(1 << j for j in range(n_max.bit_length()) if 1 << j <= n_max)
    return AppendixSeries(points, tuple(float(prefix[n]) for n in points))


def appendix_doubling(n_max: int, settings: FourierSettings = DEFAULT_SETTINGS,
                      threads: int | None = None) -> list[float]:
    """Sigma(4N) / Sigma(2N) for N in {2^j <= n_max / 4}"""
    prefix = _appendix_prefix(n_max, settings, threads)
    ratios = []
    n = 1
    while 4 * n <= n_max:
        ratios.append(float(prefix[4 * n] / prefix[2 * n]))
        n *= 2
    return ratios


def doubling_all(n_max: int, settings: FourierSettings = DEFAULT_SETTINGS,
                 threads: int | None = None) -> float:
    """Largest Sigma(4N) / Sigma(2N) over every integer 2 <= N <= n_max / 4"""
    if n_max < 8:
        raise ValueError(f"doubling_all needs n_max >= 8, got {n_max}")
    prefix = _appendix_prefix(n_max, settings, threads)
    ns = np.arange(2, n_max // 4 + 1)
    return float(np.max(prefix[4 * ns] / prefix[2 * ns]))


def doubling_power_bound(series: AppendixSeries) -> list[bool]:
    """Sigma(2^(j+1)) <= (3/2)^j Sigma(2)"""
    base = series.value(2)
    return [
        series.value(n) <= 1.5 ** (n.bit_length() - 2) * base + INEQUALITY_TOL
        for n in series.points if n >= 2
    ]


def decay_exponent(series: AppendixSeries) -> float:
    """Least-squares exponent e in Sigma(N) / N ~ N^-e; the bound gives e >= 1 - alpha"""
    points = np.array(series.points, dtype=float)
    scaled = np.array(series.values) / points
    mask = points >= 4
    slope = np.polyfit(np.log2(points[mask]), np.log2(scaled[mask]), 1)[0]
    return float(-slope)


def empirical_alpha(series: AppendixSeries) -> float:
    """alpha read off the decay exponent; the doubling bound gives alpha <= log2(3/2)"""
    return 1.0 - decay_exponent(series)


@dataclass(frozen=True)
class MomentTable:
    """M_r(nu_m) for nu_m = (delta_0 + delta_{2^-m} + delta_{-2^-m}) / 3"""

    r: int
    m: int
    value: Fraction


def jw_moment(r: int, m: int) -> Fraction:
    zero_power = 1 if r == 0 else 0
    step = Fraction(1, 2 ** (r * m))
    return Fraction(zero_power + step + (-1) ** r * step, 3)


def jw_moments(r_max: int = 8, m_max: int = 32) -> list[MomentTable]:
    """Exact moments for 0 <= r <= r_max, 1 <= m <= m_max"""
    if not 0 <= r_max <= 8 or not 1 <= m_max <= 32:
        raise ValueError(f"jw_moments needs r_max <= 8 and 1 <= m_max <= 32, got {r_max}, {m_max}")
    return [MomentTable(r, m, jw_moment(r, m)) for r in range(r_max + 1) for m in range(1, m_max + 1)]


def jw_identity_check(table: list[MomentTable]) -> bool:
    """M_0 = 1, M_1 = 0 and M_2 = (2/3) 4^-m wherever present"""
    expected = {
        0: lambda m: Fraction(1),
        1: lambda m: Fraction(0),
        2: lambda m: Fraction(2, 3) / 4 ** m,
    }
    return all(entry.value == expected[entry.r](entry.m) for entry in table if entry.r in expected)


def jw_partial_sums(m_max: int = 32) -> list[dict]:
    """Partial sums of |M_1| and M_2 with their distance to the limits 0 and 2/9"""
    rows = []
    first, second = Fraction(0), Fraction(0)
    for m in range(1, m_max + 1):
        first += abs(jw_moment(1, m))
        second += jw_moment(2, m)
        rows.append({
            "m": m,
            "sum_abs_m1": first,
            "sum_m2": second,
            "tail_m2": Fraction(2, 9) - second,
        })
    return rows


@dataclass(frozen=True)
class AtomEstimate:
    """Atom of mu_n at x across levels, plus the shifted-atom inequality at n_max"""

    x: Fraction
    masses: tuple = field(default_factory=tuple)
    jw_trick_holds: bool = True

    @property
    def mass(self) -> Fraction:
        return self.masses[-1]


def _atom(x: Fraction, n: int) -> Fraction:
    scaled = x * (1 << n)
    if scaled.denominator != 1:
        return Fraction(0)
    m = int(scaled) % (1 << n)
    return Fraction(stern_recursive((1 << n) + m), 3 ** n)


def jw_trick_check(n: int) -> bool:
    """mu_n({x}) <= mu_n({x + 2^-n}) + mu_n({x - 2^-n}) at every interior grid point"""
    if n < 0 or n > 20:
        raise ValueError(f"jw_trick_check needs 0 <= n <= 20, got {n}")
    # common denominator 3^n: compare the Stern values directly
    values = list(iter_stern(1 << n, 1 << (n + 1)))
    return all(values[m] <= values[m - 1] + values[m + 1] for m in range(1, len(values) - 1))


def atom_estimate(x, n_max: int) -> AtomEstimate:
    """mu_n({x}) for n = 0..n_max; zero when x is off the level-n grid"""
    x = Fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"atom_estimate needs x in [0, 1), got {x}")
    if n_max < 0 or n_max > 20:
        raise ValueError(f"atom_estimate needs 0 <= n_max <= 20, got {n_max}")
    denominator = x.denominator
    if not denominator & (denominator - 1) and denominator.bit_length() - 1 > 10:
        raise ValueError(f"atom_estimate needs a dyadic level <= 10, got {x}")

    masses = tuple(_atom(x, n) for n in range(n_max + 1))
    return AtomEstimate(x, masses, jw_trick_check(n_max))


def approximant_interval_masses(lo, hi, levels) -> list[tuple[int, Fraction]]:
    """mu_n([lo, hi]) for each n in levels"""
    return [(n, level_interval_mass(n, lo, hi)) for n in levels]
