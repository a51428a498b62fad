import numpy as np
import pytest

from experiments.verification import (
    SUITES,
    check_coefficient_laws,
    check_cumulative_energy,
    check_dst_involution,
    check_energy_inequality,
    check_quadratic_form,
    check_toeplitz_solver,
    coefficient_violation,
    energy_gap,
    quadratic_form,
    run_verification,
)
from kernels.fractional_kernels import l1_coefficients
from linalg.toeplitz_linalg import LinalgSettings


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def test_quadratic_form_scalar():
    assert quadratic_form(np.array([1.0]), np.array([2.0])) == pytest.approx(4.0)


def test_quadratic_form_matches_definition(rng):
    a = l1_coefficients(0.4, 6).values
    v = rng.standard_normal(6)
    expected = sum(sum(a[p] * v[n - p] for p in range(n + 1)) * v[n] for n in range(6))
    assert quadratic_form(a, v) == pytest.approx(expected, rel=1e-12)


def test_coefficient_violation_clean_table():
    assert coefficient_violation(l1_coefficients(0.3, 200).values, 0.3) <= 1e-12


def test_coefficient_violation_detects_broken_table():
    values = np.array(l1_coefficients(0.3, 20).values)
    values[5] = values[4] * 1.1
    assert coefficient_violation(values, 0.3) >= 1.0


def test_energy_gap_constant_sequence():
    """常数序列的 δ_t^α 为 0，差值为 0"""
    gap, _ = energy_gap(np.full(9, 2.0), 0.5, 0.1)
    assert gap == pytest.approx(0.0, abs=1e-12)


def test_small_suites_pass(rng):
    settings = LinalgSettings(dst_direct_threshold=16, toeplitz_base_case=8)
    results = [
        check_coefficient_laws(rng, count=5, n=200),
        check_quadratic_form(rng, count=20, max_m=16),
        check_energy_inequality(rng, count=20, max_n=16),
        check_cumulative_energy(rng, count=20, max_m=16),
        check_dst_involution(rng, sizes=(1, 7, 33), settings=settings),
        check_toeplitz_solver(rng, sizes=(17, 40), settings=settings),
    ]
    for result in results:
        assert result.passed, result
        assert result.cases > 0


def test_run_verification_only_selected(rng):
    results = run_verification(seed=1, only=["dst_involution", "quadratic_form"])
    assert [result.name for result in results] == ["quadratic_form", "dst_involution"]
    assert all(result.passed for result in results)


def test_backend_equivalence_suite_splits_results():
    results = run_verification(only=["backend_equivalence"])
    assert [result.name for result in results] == ["backend_equivalence_1d", "backend_equivalence_2d"]
    assert all(result.passed for result in results)


def test_suite_names_unique():
    names = [name for name, _ in SUITES]
    assert len(names) == len(set(names))
