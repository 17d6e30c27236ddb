"""
Tests for the closed-form random-matrix predictions and the block model.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Try importing directly first (if package is installed)
try:
    from qeclab.analytics import (
        BlockModelParams,
        block_model_failure,
        block_model_recovery_rmt,
        capacity_erasure_rate,
        count_rank_matrices_log2,
        critical_recovery_constant,
        iid_failure_exact,
        iid_scaling,
        ising_surface_estimate,
        rmt_failure,
        rmt_failure_asymptotic,
        rmt_mean_rank_excess,
        rmt_recovery,
    )
    from qeclab.exceptions import DomainError, InvalidArgumentError
except ImportError:
    # If not installed, add src to path
    test_dir = Path(__file__).parent
    src_dir = test_dir.parent / 'src'
    sys.path.insert(0, str(src_dir))
    from qeclab.analytics import (
        BlockModelParams,
        block_model_failure,
        block_model_recovery_rmt,
        capacity_erasure_rate,
        count_rank_matrices_log2,
        critical_recovery_constant,
        iid_failure_exact,
        iid_scaling,
        ising_surface_estimate,
        rmt_failure,
        rmt_failure_asymptotic,
        rmt_mean_rank_excess,
        rmt_recovery,
    )
    from qeclab.exceptions import DomainError, InvalidArgumentError

# Import the test runner
try:
    from tests.test_runner import run_tests
except ImportError:
    from test_runner import run_tests


def test_rank_counts_small():
    # 2x2: one zero matrix, nine of rank 1, six invertible
    assert count_rank_matrices_log2(2, 2, 0) == pytest.approx(0.0)
    assert count_rank_matrices_log2(2, 2, 1) == pytest.approx(math.log2(9))
    assert count_rank_matrices_log2(2, 2, 2) == pytest.approx(math.log2(6))
    assert count_rank_matrices_log2(3, 3, 1) == pytest.approx(math.log2(49))


def test_rank_counts_sum_to_all_matrices():
    for rows, cols in [(2, 3), (4, 4), (5, 2), (6, 7)]:
        total = sum(2.0 ** count_rank_matrices_log2(rows, cols, m) for m in range(min(rows, cols) + 1))
        assert total == pytest.approx(2.0 ** (rows * cols), rel=1e-12)


def test_rank_counts_reject_impossible_rank():
    with pytest.raises(InvalidArgumentError):
        count_rank_matrices_log2(2, 3, 3)
    with pytest.raises(InvalidArgumentError):
        count_rank_matrices_log2(2, 3, -1)


def test_rmt_small_cases():
    assert rmt_recovery(1, 2) == pytest.approx(43 / 64, abs=1e-12)
    assert rmt_failure(1, 2) == pytest.approx(21 / 64, abs=1e-12)
    # no stabilizers: a single erasure always destroys two bits of logical information
    assert rmt_recovery(1, 0) == pytest.approx(0.25)
    assert rmt_recovery(0, 5) == 1.0
    assert rmt_failure(0, 5) == 0.0


def test_rmt_recovery_near_critical_constant():
    assert rmt_recovery(20, 40) == pytest.approx(0.610322, abs=1e-6)


def test_rmt_failure_keeps_tiny_values():
    f = rmt_failure(2, 40)
    assert 0.0 < f < 1e-9
    assert rmt_recovery(2, 40) == pytest.approx(1.0)


def test_rmt_recovery_and_failure_are_complementary():
    for n_e, n_s in [(3, 4), (5, 10), (8, 12), (10, 6)]:
        assert rmt_recovery(n_e, n_s) + rmt_failure(n_e, n_s) == pytest.approx(1.0, abs=1e-12)


def test_rmt_recovery_decreases_with_erasures():
    values = [rmt_recovery(n_e, 20) for n_e in range(0, 21)]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_rmt_negative_counts_rejected():
    with pytest.raises(InvalidArgumentError):
        rmt_recovery(-1, 4)


def test_mean_rank_excess():
    # recovery is the average of 2^-r_M, so by Jensen recovery >= 2^-E[r_M]
    for n_e, n_s in [(2, 4), (6, 12), (9, 12)]:
        excess = rmt_mean_rank_excess(n_e, n_s)
        assert 0.0 <= excess <= 2 * n_e
        assert rmt_recovery(n_e, n_s) >= 2.0 ** -excess - 1e-12
    assert rmt_mean_rank_excess(3, 0) == pytest.approx(6.0)


def test_critical_constant():
    rc = critical_recovery_constant()
    assert 0.610321 <= rc <= 0.610323


def test_critical_recovery_independent_of_rate():
    # 2 n_e = n_s at N = 64 for R = 1/4, 1/2, 3/4
    for n_e, n_s in [(24, 48), (16, 32), (8, 16)]:
        assert rmt_recovery(n_e, n_s) == pytest.approx(critical_recovery_constant(), abs=1e-3)


def test_asymptotic_failure():
    assert rmt_failure_asymptotic(0) == pytest.approx(0.389678, abs=1e-5)
    assert rmt_failure_asymptotic(-3) == pytest.approx(2.0 ** -4)
    assert rmt_failure_asymptotic(2) == pytest.approx(0.75)


def test_asymptotic_matches_large_finite_size():
    for delta in (-4, 4):
        n_s = 60
        n_e = (n_s + delta) // 2
        assert rmt_failure(n_e, n_s) == pytest.approx(rmt_failure_asymptotic(delta), rel=0.25)


def test_capacity_erasure_rate():
    assert capacity_erasure_rate(0.5) == pytest.approx(0.25)
    assert capacity_erasure_rate(0.0) == pytest.approx(0.5)
    with pytest.raises(InvalidArgumentError):
        capacity_erasure_rate(1.5)


def test_iid_scaling_values():
    assert iid_scaling(0.0, 0.25) == pytest.approx(0.345494, abs=1e-6)
    xs = np.linspace(-3.0, 3.0, 25)
    values = [iid_scaling(float(x), 0.25) for x in xs]
    assert all(a > b for a, b in zip(values, values[1:]))
    # far below threshold f(x) ~ -x sqrt(e(1-e)) * 2
    assert iid_scaling(-6.0, 0.25) == pytest.approx(2 * 6.0 * math.sqrt(0.1875), rel=1e-3)
    with pytest.raises(InvalidArgumentError):
        iid_scaling(0.0, 1.0)


def test_iid_failure_exact_is_capped_at_zero_erasures():
    # e = 0 puts all weight on n_e = 0, where the failure is exactly zero
    assert iid_failure_exact(16, 8, 0.0, cap=50.0) == pytest.approx(50.0)


@pytest.mark.slow
def test_iid_exact_approaches_scaling():
    e, rate = 0.2, 0.5
    ratios = []
    for n in (64, 256):
        n_s = int(round((1 - rate) * n))
        x = (e - capacity_erasure_rate(rate)) * math.sqrt(n) / math.sqrt(e * (1 - e))
        exact = iid_failure_exact(n, n_s, e)
        ratios.append(exact / (math.sqrt(n) * iid_scaling(x, e)))
    assert ratios[0] == pytest.approx(1.0, rel=0.3)
    assert ratios[1] == pytest.approx(1.0, rel=0.15)
    assert abs(ratios[1] - 1.0) < abs(ratios[0] - 1.0)


def test_block_model_failure():
    params = BlockModelParams(1024, 64, 0.2, 0.5)
    assert params.n_blocks == 16
    assert params.sigma_b == pytest.approx(math.sqrt(0.16 * 64))
    assert block_model_failure(params) == pytest.approx(8.52e-3, rel=0.01)


def test_block_model_failure_grows_with_erasure_rate():
    values = [block_model_failure(BlockModelParams(1024, 64, e, 0.5)) for e in (0.1, 0.15, 0.2, 0.22)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_block_model_outside_domain():
    with pytest.raises(DomainError):
        block_model_failure(BlockModelParams(1024, 64, 0.25, 0.5))
    with pytest.raises(DomainError):
        block_model_failure(BlockModelParams(1024, 64, 0.3, 0.5))


def test_block_model_params_validation():
    with pytest.raises(InvalidArgumentError):
        BlockModelParams(100, 64, 0.2, 0.5)
    with pytest.raises(InvalidArgumentError):
        BlockModelParams(128, 64, 0.0, 0.5)


def test_block_model_rmt_product():
    params = BlockModelParams(256, 32, 0.15, 0.5)
    single = block_model_recovery_rmt(BlockModelParams(32, 32, 0.15, 0.5))
    assert block_model_recovery_rmt(params) == pytest.approx(single ** 8)
    assert 0.0 < single < 1.0


def test_ising_surface_estimate_regimes():
    # N = 16, R = 1/2, n_s = 8
    assert ising_surface_estimate(3, 8, 0.5, 16) == 0.0
    assert ising_surface_estimate(4, 8, 0.5, 16) == 0.0
    assert ising_surface_estimate(7, 8, 0.5, 16) == 6.0
    assert ising_surface_estimate(12, 8, 0.5, 16) == 16.0


if __name__ == "__main__":
    run_tests("Testing random-matrix predictions")
