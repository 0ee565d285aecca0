"""Level approximants and Fourier coefficients of the Stern measure"""

import math
from fractions import Fraction

import numpy as np
import pytest

from src import fourier
from src.fourier import FourierSettings, OddPartCache


def test_level_two_weights():
    measure = fourier.level_measure(2)
    assert measure.weights == (Fraction(1, 9), Fraction(1, 3), Fraction(2, 9), Fraction(1, 3))
    assert measure.support() == [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]


@pytest.mark.parametrize("n", range(0, 11))
def test_level_measure_is_probability(n):
    assert fourier.level_measure(n).total() == 1


@pytest.mark.parametrize("n", range(0, 9))
def test_convolution_matches_stern_weights(n):
    assert fourier.level_measure_convolution(n) == fourier.level_measure(n)


@pytest.mark.parametrize("n", [1, 4, 9])
def test_level_reflection(n):
    assert fourier.level_reflection_check(n)


def test_level_measure_bounds():
    with pytest.raises(ValueError):
        fourier.level_measure(-1)
    with pytest.raises(ValueError):
        fourier.level_measure(fourier.MAX_LEVEL + 1)


def test_atom_off_grid_is_zero():
    measure = fourier.level_measure(3)
    assert measure.atom(Fraction(1, 3)) == 0
    assert measure.atom(Fraction(1, 4)) == Fraction(1, 9)


@pytest.mark.parametrize("n, expected", [(2, Fraction(4, 9)), (3, Fraction(8, 27)), (4, Fraction(20, 81))])
def test_level_interval_mass(n, expected):
    assert fourier.level_interval_mass(n, 0, Fraction(1, 4)) == expected


def test_level_interval_mass_empty():
    assert fourier.level_interval_mass(3, Fraction(1, 3), Fraction(1, 3)) == 0


def test_level_two_line_counts():
    # atoms at j/4 for -3 <= j <= 3
    assert fourier.level_line_counts(2).tolist() == [1, 1, 2, 1, 2, 1, 1]


@pytest.mark.parametrize("n", range(0, 9))
def test_line_counts_fold_to_torus_weights(n):
    counts = fourier.level_line_counts(n)
    size = 1 << n
    folded = counts[size - 1:].copy()
    folded[1:] += counts[:size - 1]
    assert sum(counts) == 3 ** n
    assert [Fraction(int(c), 3 ** n) for c in folded] == list(fourier.level_measure(n).weights)


@pytest.mark.parametrize("n", range(0, 8))
@pytest.mark.parametrize("k", [-7, -1, 0, 1, 2, 5, 13, 64, 0.3, 2.75, 7.9])
def test_product_matches_direct_sum(n, k):
    assert fourier.mu_hat_level(n, k) == pytest.approx(fourier.mu_hat_level_direct(n, k), abs=1e-12)


def test_direct_sum_at_non_integer_frequency():
    k = 0.3
    expected = (1 + 4 * math.cos(math.pi * k / 2) + 2 * math.cos(math.pi * k) + 2 * math.cos(3 * math.pi * k / 2)) / 9
    assert fourier.mu_hat_level_direct(2, k) == pytest.approx(expected, abs=1e-14)
    assert fourier.mu_hat_level(2, k) == pytest.approx(expected, abs=1e-14)


def test_mu_hat_at_one():
    assert fourier.mu_hat(1) == pytest.approx(-0.083432, abs=5e-7)


def test_mu_hat_at_two_fifths():
    assert fourier.mu_hat(0.4) == pytest.approx(0.450342617, abs=1e-8)


def test_mu_hat_zero_and_first_factor_zero():
    assert fourier.mu_hat(0) == 1.0
    # (1 + 2 cos(pi k)) vanishes at k = 2/3
    assert abs(fourier.mu_hat(2 / 3)) < 1e-12


def test_mu_hat_is_even():
    assert fourier.mu_hat(-1.7) == fourier.mu_hat(1.7)


def test_mu_hat_range_limit():
    with pytest.raises(ValueError):
        fourier.mu_hat(2.0 ** 41)


def test_mu_hat_array_matches_scalar():
    ks = np.array([0.0, 0.25, 1.0, 3.5, 100.0])
    values = fourier.mu_hat_array(ks)
    assert values == pytest.approx([fourier.mu_hat(k) for k in ks], abs=0)


def test_truncation_depth():
    assert fourier.truncation_depth(1) == 24
    assert fourier.truncation_depth(2 ** 30) == 48
    assert fourier.truncation_depth(0) == 24


def test_truncation_depth_tail_bound():
    settings = FourierSettings(tail_tol=1e-10, min_depth=8)
    for k in (0.5, 3.0, 1000.0, 12345.678):
        depth = fourier.truncation_depth(k, settings)
        top = math.ceil(math.log2(max(abs(k), 1.0)))
        reduced = abs(k) / 2 ** top
        assert (4 * math.pi ** 2 * reduced ** 2 / 9) * 4.0 ** -(depth - top) <= 1e-10


@pytest.mark.parametrize("k", [-3.9, -1.25, 0.1, 0.5, 1.0, 2.2, 3.99])
def test_scaling_residual(k):
    assert fourier.scaling_residual(k) <= 4e-10


@pytest.mark.parametrize("n", [1, 3, 6])
def test_doubling_product_scales_coefficients(n):
    kappas = np.array([0.1, 0.3, 0.45, 0.77])
    scaled = fourier.mu_hat_array(np.ldexp(kappas, n))
    assert scaled == pytest.approx(fourier.doubling_product(n, kappas) * fourier.mu_hat_array(kappas), abs=1e-9)


def test_doubling_product_symmetric_about_half():
    assert fourier.doubling_symmetry_check(10, grid=1001) <= 1e-10
    assert fourier.doubling_product(0, [0.2]).tolist() == [1.0]


@pytest.mark.parametrize("k", [0.4, 1.0, 3.7, 12.5])
def test_level_refinement_errors_shrink(k):
    errors = fourier.level_refinement_errors(k)
    assert all(b <= a for a, b in zip(errors, errors[1:]))
    assert errors[-1] < 1e-8


def test_settings_validation():
    with pytest.raises(ValueError):
        FourierSettings(tail_tol=0.0)
    with pytest.raises(ValueError):
        FourierSettings(tail_tol=1e-3)
    with pytest.raises(ValueError):
        FourierSettings(min_depth=4)


@pytest.mark.parametrize("k, expected", [(0, 0), (1, 1), (12, 3), (-40, 5), (1024, 1)])
def test_odd_part(k, expected):
    assert fourier.odd_part(k) == expected


def test_odd_parts_vectorised():
    ks = np.array([0, 1, 12, -40, 1024, 7])
    assert fourier.odd_parts(ks).tolist() == [0, 1, 3, 5, 1, 7]


@pytest.mark.parametrize("k", [1, 3, 6, 77, 1000])
def test_integer_doubling_invariance(k):
    assert fourier.mu_hat_int(2 * k) == fourier.mu_hat_int(k)
    assert fourier.mu_hat_int(-k) == fourier.mu_hat_int(k)


def test_integer_path_matches_real_path():
    assert fourier.mu_hat_int(12) == pytest.approx(fourier.mu_hat(3.0), abs=1e-15)
    assert fourier.mu_hat_int(0) == 1.0


def test_odd_table_does_not_depend_on_threads():
    fourier.coefficient_cache().clear()
    threaded = fourier.mu_hat_odd_table(1 << 16, threads=4)
    fourier.coefficient_cache().clear()
    serial = fourier.mu_hat_odd_table(1 << 16, threads=1)
    assert np.array_equal(threaded, serial)
    assert serial[1] == fourier.mu_hat_int(3)


def test_int_array_lookup():
    table = fourier.mu_hat_odd_table(64)
    ks = np.array([0, 1, 2, 6, -6, 48])
    values = fourier.mu_hat_int_array(ks, table)
    assert values.tolist() == [fourier.mu_hat_int(k) for k in ks]


def test_odd_part_cache_eviction():
    cache = OddPartCache(maxsize=2)
    cache.insert_if_absent("a", 1.0)
    cache.insert_if_absent("b", 2.0)
    assert cache.insert_if_absent("a", 9.0) == 1.0
    cache.insert_if_absent("c", 3.0)
    assert cache.get("b") is None
    assert cache.get("a") == 1.0
    assert len(cache) == 2
