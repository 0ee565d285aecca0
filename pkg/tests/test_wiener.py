"""Averaged squared coefficients, coefficient inequalities, moments and atoms"""

import math
from fractions import Fraction

import numpy as np
import pytest

from src import fourier, wiener


@pytest.fixture(scope="module")
def series():
    return wiener.wiener_series(10)


def test_first_average(series):
    first = fourier.mu_hat(1) ** 2
    assert series.sigma[0] == pytest.approx(1 + first)
    assert series.sigma[1] == pytest.approx((1 + 2 * first) / 2)
    assert series.at(-1) == 0.0


def test_sublinear_recursion(series):
    assert all(wiener.check_sublinear(series))
    assert all(wiener.check_two_step(series))


def test_geometric_decay(series):
    assert all(wiener.geometric_bound_check(series))
    assert series.sigma[-1] < series.sigma[0]


def test_sigma_strictly_decreasing(series):
    sigma = series.sigma
    assert all(sigma[n] < sigma[n - 1] for n in range(2, len(sigma)))


def test_grouped_sum_agrees(series):
    assert wiener.sigma_grouped(series) == pytest.approx(list(series.sigma), rel=1e-12)


def test_series_bounds():
    with pytest.raises(ValueError):
        wiener.wiener_series(21)
    with pytest.raises(ValueError):
        wiener.check_sublinear(wiener.wiener_series(1))


def test_series_does_not_depend_on_threads():
    fourier.coefficient_cache().clear()
    threaded = wiener.wiener_series(16, threads=4)
    fourier.coefficient_cache().clear()
    serial = wiener.wiener_series(16, threads=1)
    assert threaded.sigma == serial.sigma


def test_stable_sum():
    values = np.linspace(0.0, 1.0, 10_001)
    assert wiener.stable_sum(values) == pytest.approx(math.fsum(values), rel=1e-14)


def test_ratio_bound():
    bound = wiener.ratio_bound_check(grid=2000)
    assert bound.argmax == pytest.approx(0.877996139, abs=1e-6)
    assert bound.numerator == pytest.approx(0.105423890, abs=1e-7)
    assert bound.denominator == pytest.approx(0.450342617, abs=1e-8)
    assert bound.argmin == pytest.approx(0.4)
    assert bound.ratio < 0.24


def test_ratio_bound_grid_floor():
    with pytest.raises(ValueError):
        wiener.ratio_bound_check(grid=999)


def test_integer_reflection():
    assert all(wiener.integer_reflection_check(10))


def test_ratio_identity():
    assert wiener.ratio_identity_check(10, grid=400) <= 1e-9


def test_reflection_estimate_on_real_grid():
    assert all(wiener.reflection_estimate_check(10, grid=401))


def test_appendix_second_inequality_holds():
    slack = wiener.appendix_inequalities(256)
    assert slack.worst_slack_2 <= 1e-9


def test_appendix_first_inequality_fails_at_83():
    odd = abs(fourier.mu_hat_int(167))
    average = 0.5 * abs(fourier.mu_hat_int(83) + fourier.mu_hat_int(84))
    assert odd == pytest.approx(1.8593e-7, rel=1e-3)
    assert average == pytest.approx(7.2517e-8, rel=1e-3)

    slack = wiener.appendix_inequalities(256)
    assert slack.worst_k_1 in (83, -84)
    assert slack.worst_slack_1 == pytest.approx(odd - average, rel=1e-6)
    assert slack.violations_1 >= 2


def test_appendix_doubling():
    ratios = wiener.appendix_doubling(1 << 12)
    assert len(ratios) == 11
    assert all(ratio <= 1.5 + 1e-9 for ratio in ratios)
    assert wiener.doubling_all(1 << 12) <= 1.5 + 1e-9


def test_appendix_power_bound_and_alpha():
    series = wiener.appendix_series(1 << 12)
    assert series.points[0] == 1 and series.points[-1] == 1 << 12
    assert all(wiener.doubling_power_bound(series))
    assert 0.0 < wiener.empirical_alpha(series) <= wiener.DOUBLING_ALPHA + 0.05


def test_appendix_bounds():
    with pytest.raises(ValueError):
        wiener.appendix_doubling(1 << 17)
    with pytest.raises(ValueError):
        wiener.appendix_inequalities(100_001)


@pytest.mark.parametrize("m", [1, 5, 32])
def test_moment_identities(m):
    assert wiener.jw_moment(0, m) == 1
    assert wiener.jw_moment(1, m) == 0
    assert wiener.jw_moment(2, m) == Fraction(2, 3) / 4 ** m
    assert wiener.jw_moment(3, m) == 0


def test_moment_table():
    table = wiener.jw_moments(8, 32)
    assert len(table) == 9 * 32
    assert wiener.jw_identity_check(table)
    assert wiener.jw_moment(4, 1) == Fraction(1, 24)
    with pytest.raises(ValueError):
        wiener.jw_moments(9, 32)


def test_moment_partial_sums():
    rows = wiener.jw_partial_sums(32)
    assert all(row["sum_abs_m1"] == 0 for row in rows)
    assert rows[-1]["tail_m2"] == Fraction(2, 9) / 4 ** 32
    tails = [row["tail_m2"] for row in rows]
    assert all(b < a for a, b in zip(tails, tails[1:]))


@pytest.mark.parametrize("n", [0, 1, 5, 12])
def test_shifted_atom_inequality(n):
    assert wiener.jw_trick_check(n)


def test_atom_estimate_at_quarter():
    estimate = wiener.atom_estimate(Fraction(1, 4), 12)
    assert estimate.masses[:2] == (0, 0)
    assert estimate.masses[2] == Fraction(1, 3)
    assert estimate.mass == Fraction(3, 3 ** 12)
    assert estimate.jw_trick_holds


def test_atom_estimate_off_grid():
    assert wiener.atom_estimate(Fraction(1, 3), 10).mass == 0


def test_atom_estimate_bounds():
    with pytest.raises(ValueError):
        wiener.atom_estimate(Fraction(1, 2048), 12)
    with pytest.raises(ValueError):
        wiener.atom_estimate(Fraction(1, 2), 21)


def test_approximant_masses_approach_limit():
    masses = wiener.approximant_interval_masses(0, Fraction(1, 4), range(2, 15))
    gaps = [abs(mass - Fraction(2, 9)) for _, mass in masses]
    assert masses[0] == (2, Fraction(4, 9))
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
