"""Stern sequence, linear representation, block sums and summatory function"""

from fractions import Fraction

import numpy as np
import pytest

from src import stern

FIRST_TERMS = [0, 1, 1, 2, 1, 3, 2, 3, 1, 4, 3, 5, 2, 5, 3, 4, 1]


def test_recursive_first_terms():
    assert [stern.stern_recursive(n) for n in range(17)] == FIRST_TERMS


def test_sequence_matches_recursion():
    assert stern.stern_sequence(16) == FIRST_TERMS


@pytest.mark.parametrize("n, expected", [(1, 1), (5, 3), (9, 4), (11, 5), (16, 1)])
def test_matrix_form(n, expected):
    assert stern.stern_matrix(n) == expected


def test_row_vector_carries_successor():
    assert stern.stern_row(5) == (2, 3)


def test_matrix_form_rejects_zero():
    with pytest.raises(ValueError):
        stern.stern_matrix(0)


def test_matrix_batch_agrees_with_sequence():
    ns = np.arange(1, 5000)
    expected = np.array(stern.stern_sequence(4999)[1:])
    assert np.array_equal(stern.stern_matrix_batch(ns), expected)


def test_iter_stern_window():
    assert list(stern.iter_stern(10, 40)) == stern.stern_sequence(39)[10:]
    assert list(stern.iter_stern(0, 5)) == FIRST_TERMS[:5]
    assert list(stern.iter_stern(7, 7)) == []


@pytest.mark.parametrize("n", range(13))
def test_block_sum_is_power_of_three(n):
    assert stern.block_sum(n) == 3 ** n


def test_memo_respects_cap():
    memo = stern.SternMemo(cap=10)
    assert stern.stern_recursive(1000, memo) == stern.stern_sequence(1000)[1000]
    assert max(memo.values) <= 10


@pytest.mark.parametrize("n", range(1, 10))
def test_summatory_over_full_blocks(n):
    assert stern.summatory((1 << n) - 1) == (3 ** n - 1) // 2


def test_summatory_table_prefix():
    table = stern.summatory_table(64)
    assert table[7] == 13
    assert all(table[x] == stern.summatory(x) for x in range(1, 65))


def test_summatory_rejects_small_argument():
    with pytest.raises(ValueError):
        stern.summatory(0)


def test_asymptotic_argument_int_and_float():
    assert stern.asymptotic_argument(6) == (2, Fraction(3, 4))
    assert stern.asymptotic_argument(6.0) == (2, Fraction(3, 4))
    assert stern.asymptotic_argument(Fraction(9, 2)) == (2, Fraction(9, 16))


@pytest.mark.parametrize("n", range(1, 12))
def test_asymptotic_main_term_at_powers_of_two(n):
    assert stern.summatory_asymptotic_exact(1 << n) == Fraction(3 ** n, 2)
    assert stern.summatory(1 << n) - stern.summatory_asymptotic_exact(1 << n) == Fraction(1, 2)


def test_asymptotic_main_term_at_one():
    assert stern.summatory_asymptotic_exact(1) == Fraction(1, 2)
    assert stern.summatory_asymptotic(1) == 0.5


def test_asymptotic_main_term_at_non_dyadic_argument():
    # 10/3 / 4 = 5/6 has no finite binary expansion
    with pytest.raises(ValueError):
        stern.summatory_asymptotic_exact(Fraction(10, 3))
    value = stern.summatory_asymptotic(Fraction(10, 3))
    assert value == stern.summatory_asymptotic(10 / 3)
    assert stern.summatory_asymptotic(3) == 3.0
    assert 3.0 < value < 4.5


def test_residual_profile_rows():
    profile = stern.residual_profile(1 << 12)
    assert profile["rows"]
    assert set(profile["rows"][0]) == {"x", "summatory", "asymptotic", "residual", "scaled"}
    assert profile["exponent"] < 1.0


def test_linear_representation_checks():
    assert all(stern.linear_rep_check().values())


def test_spectral_radius_of_alternating_product():
    # S0 S1 has trace 3 and determinant 1
    assert stern.spectral_radius_2x2(3, 1) == pytest.approx(stern.GOLDEN_RATIO ** 2)


def test_jsr_is_golden_ratio():
    assert stern.jsr_estimate(8) == pytest.approx(stern.GOLDEN_RATIO, rel=1e-12)
    assert stern.jsr_witness(8) == "01"


def test_jsr_estimate_is_monotone_in_length():
    estimates = [stern.jsr_estimate(length) for length in range(2, 13)]
    assert all(b >= a for a, b in zip(estimates, estimates[1:]))
    assert all(abs(value - stern.GOLDEN_RATIO) <= 1e-12 for value in estimates)


def test_jsr_length_bounds():
    with pytest.raises(ValueError):
        stern.jsr_estimate(0)
    with pytest.raises(ValueError):
        stern.jsr_estimate(17)


def test_jsr_single_letters():
    assert stern.jsr_estimate(1) == pytest.approx(1.0)


def test_two_regular_identity():
    values = stern.stern_sequence(4 * 10 ** 5 + 1)
    assert all(values[4 * n + 1] == values[2 * n] + values[2 * n + 1] for n in range(10 ** 5))


def test_summatory_block_boundaries():
    table = stern.summatory_table(1 << 18)
    values = stern.stern_sequence(1 << 18)
    for n in range(1, 19):
        lo, hi = 1 << (n - 1), 1 << n
        assert table[hi] - table[lo] == 3 ** (n - 1) + values[hi] - values[lo]
