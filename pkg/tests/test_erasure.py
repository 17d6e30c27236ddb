"""
Tests for erasure models, the syndrome matrix and the optimal erasure decoder.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Try importing directly first (if package is installed)
try:
    from qeclab.circuits import GateEnsemble, Geometry, apply_random_circuit
    from qeclab.erasure import (
        ErasureModel,
        ErasurePattern,
        brute_force_recovery,
        most_likely_correction,
        probe_failures,
        recovery_probability,
        sample_erasure,
        syndrome_matrix,
        zero_syndrome_logical_basis,
    )
    from qeclab.exceptions import InvalidArgumentError, NoSolutionError, ResourceLimitError
    from qeclab.pauli import PauliOperator
    from qeclab.stabilizer import SubsystemCode, spread_logical_sites, trivial_code
except ImportError:
    # If not installed, add src to path
    test_dir = Path(__file__).parent
    src_dir = test_dir.parent / 'src'
    sys.path.insert(0, str(src_dir))
    from qeclab.circuits import GateEnsemble, Geometry, apply_random_circuit
    from qeclab.erasure import (
        ErasureModel,
        ErasurePattern,
        brute_force_recovery,
        most_likely_correction,
        probe_failures,
        recovery_probability,
        sample_erasure,
        syndrome_matrix,
        zero_syndrome_logical_basis,
    )
    from qeclab.exceptions import InvalidArgumentError, NoSolutionError, ResourceLimitError
    from qeclab.pauli import PauliOperator
    from qeclab.stabilizer import SubsystemCode, spread_logical_sites, trivial_code

# Import the test runner
try:
    from tests.test_runner import run_tests
except ImportError:
    from test_runner import run_tests

FOUR_TWO_TWO = """\
STAB
+XXXX
+ZZZZ
DESTAB
+ZIII
+IXII
LOGICAL
+IIXX
+ZIZI
+IXIX
+IIZZ
"""


def random_code(n_qubits: int, k: int, depth: int, seed: int) -> SubsystemCode:
    code = trivial_code(n_qubits, spread_logical_sites(n_qubits, k))
    apply_random_circuit(code, Geometry.all_to_all(n_qubits), GateEnsemble.CLIFFORD_2Q, depth,
                         np.random.default_rng(seed))
    return code


def test_sampling_models():
    rng = np.random.default_rng(0)
    p = sample_erasure(ErasureModel.fixed(5), 16, rng)
    assert p.n_erased == 5 and list(p.sites) == sorted(set(p.sites))
    p = sample_erasure(ErasureModel.regular(4), 16, rng)
    assert p.n_erased == 4 and np.all(np.diff(p.sites) == 4)
    assert sample_erasure(ErasureModel.iid(0.0), 16, rng).n_erased == 0
    assert sample_erasure(ErasureModel.iid(1.0), 16, rng).n_erased == 16
    with pytest.raises(InvalidArgumentError):
        sample_erasure(ErasureModel.fixed(17), 16, rng)
    with pytest.raises(InvalidArgumentError):
        sample_erasure(ErasureModel.regular(3), 16, rng)


def test_fixed_from_delta():
    assert ErasureModel.fixed_from_delta(0, 8).n_erased == 4
    assert ErasureModel.fixed_from_delta(-2, 8).n_erased == 3
    with pytest.raises(InvalidArgumentError):
        ErasureModel.fixed_from_delta(1, 8)
    with pytest.raises(InvalidArgumentError):
        ErasurePattern.of([1, 1])


def test_syndrome_matrix_layout():
    """Rows (Z_i, X_i) per erased site, columns stabilizers then logicals."""
    code = trivial_code(2, [1])
    sm = syndrome_matrix(code, ErasurePattern.of([0, 1]))
    assert sm.split == 1
    # stabilizer Z0, logicals X1, Z1
    assert sm.m.to_bits().tolist() == [
        [0, 0, 0],  # Z0
        [1, 0, 0],  # X0
        [0, 1, 0],  # Z1 anticommutes with X1
        [0, 0, 1],  # X1 anticommutes with Z1
    ]


def test_recovery_on_four_two_two():
    code = SubsystemCode.parse(FOUR_TWO_TWO)
    single = recovery_probability(code, ErasurePattern.of([2]))
    assert single == (1.0, 0, 2)
    pair = recovery_probability(code, ErasurePattern.of([0, 1]))
    assert pair.r_m == 2 and pair.probability == 0.25 and pair.coherent_information == 0
    assert brute_force_recovery(code, ErasurePattern.of([0, 1])) == 0.25


def test_empty_and_full_erasure():
    code = random_code(8, 2, 6, seed=1)
    assert recovery_probability(code, ErasurePattern.of([])).r_m == 0
    full = recovery_probability(code, ErasurePattern.of(range(8)))
    assert full.r_m == 2 * code.n_logical


def test_brute_force_agrees_with_rank_formula():
    rng = np.random.default_rng(2)
    for seed in range(6):
        code = random_code(8, 2, 4, seed)
        for n_e in (1, 3, 4, 5):
            pattern = sample_erasure(ErasureModel.fixed(n_e), 8, rng)
            assert brute_force_recovery(code, pattern) == recovery_probability(code, pattern).probability
    with pytest.raises(ResourceLimitError):
        brute_force_recovery(random_code(10, 1, 2, 0), ErasurePattern.of(range(9)))


def test_brute_force_on_hand_built_codes():
    """Values that follow from the generators alone, with no syndrome matrix involved."""
    code = trivial_code(3, [1])
    assert brute_force_recovery(code, ErasurePattern.of([1])) == 0.25
    assert brute_force_recovery(code, ErasurePattern.of([0, 2])) == 1.0
    assert brute_force_recovery(code, ErasurePattern.of([0, 1, 2])) == 0.25
    assert brute_force_recovery(trivial_code(2, []), ErasurePattern.of([0, 1])) == 1.0

    # a gauge qubit on site 0 carries no logical information
    gauge = trivial_code(3, [0, 2])
    gauge.measure(PauliOperator.from_string("ZII"), np.random.default_rng(0), "gauge")
    assert (gauge.n_logical, gauge.n_gauge) == (1, 1)
    for sites, expected in (([0], 1.0), ([2], 0.25), ([0, 1], 1.0), ([1, 2], 0.25)):
        pattern = ErasurePattern.of(sites)
        assert brute_force_recovery(gauge, pattern) == expected
        assert recovery_probability(gauge, pattern).probability == expected


def test_zero_syndrome_basis():
    rng = np.random.default_rng(3)
    code = random_code(10, 4, 6, seed=3)
    for _ in range(5):
        pattern = sample_erasure(ErasureModel.fixed(5), 10, rng)
        basis = zero_syndrome_logical_basis(code, pattern)
        assert len(basis) == recovery_probability(code, pattern).r_m
        for p in basis:
            assert set(p.support()) <= set(pattern.sites)
            assert not code.syndrome(p).any()
            assert code.logicals().commutation_with(p).any()


def test_probe_failures_on_four_two_two():
    code = SubsystemCode.parse(FOUR_TWO_TWO)
    report = probe_failures(code, ErasurePattern.of([0, 1]), [0, 1])
    assert report.d.tolist() == [1, 1]
    assert report.joint_d == 2 and report.joint_flag
    clean = probe_failures(code, ErasurePattern.of([3]), [0, 1])
    assert clean.d.tolist() == [0, 0] and not clean.joint_flag
    with pytest.raises(InvalidArgumentError):
        probe_failures(code, ErasurePattern.of([0]), [2])


def test_most_likely_correction_reproduces_syndrome():
    rng = np.random.default_rng(6)
    code = random_code(10, 2, 6, seed=6)
    pattern = sample_erasure(ErasureModel.fixed(4), 10, rng)
    coeffs = rng.integers(0, 2, size=2 * pattern.n_erased)
    x = np.zeros(10, dtype=np.uint8)
    z = np.zeros(10, dtype=np.uint8)
    for j, site in enumerate(pattern.sites):
        z[site], x[site] = coeffs[2 * j], coeffs[2 * j + 1]
    error = PauliOperator.from_bits(x, z)
    correction = most_likely_correction(code, pattern, code.syndrome(error))
    assert np.array_equal(code.syndrome(correction), code.syndrome(error))
    assert set(correction.support()) <= set(pattern.sites)

    with pytest.raises(NoSolutionError):
        most_likely_correction(trivial_code(2, [1]), ErasurePattern.of([1]), [1])


if __name__ == "__main__":
    run_tests("Testing erasure decoding")
