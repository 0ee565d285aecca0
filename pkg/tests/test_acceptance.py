"""Acceptance suite wiring and a few of its cheaper criteria"""

import pytest

from src import acceptance
from src.fourier import DEFAULT_SETTINGS


@pytest.mark.parametrize("check", [
    acceptance.check_sequence_equivalence,
    acceptance.check_block_sums,
    acceptance.check_fourier_oracle,
    acceptance.check_scaling,
    acceptance.check_appendix,
    acceptance.check_mu_hat_one,
    acceptance.check_dilation_exactness,
    acceptance.check_strict_increase,
    acceptance.check_weak_convergence,
])
def test_quick_criteria(check):
    result = check(acceptance.QUICK, DEFAULT_SETTINGS, 2000, 1)
    assert result.passed, result.details


def test_checks_are_numbered_in_order():
    results = [check(acceptance.QUICK, DEFAULT_SETTINGS, 2000, 1) for check in acceptance.CHECKS[:4]]
    assert [result.number for result in results] == [1, 2, 3, 4]
    assert len(acceptance.CHECKS) == 15


def test_appendix_reports_first_inequality_without_gating():
    result = acceptance.check_appendix(acceptance.QUICK, DEFAULT_SETTINGS, 2000, 1)
    assert result.passed
    assert result.details["worst_k_1"] in (83, -84)
    assert result.details["violations_1"] > 0


def test_format_details():
    text = acceptance.format_details({"a": 0.1, "b": True, "c": 3})
    assert text == "a=0.1;b=true;c=3"


@pytest.mark.slow
def test_full_suite():
    results = acceptance.run_suite(DEFAULT_SETTINGS, threads=None)
    failed = [(result.number, result.details) for result in results if not result.passed]
    assert not failed
