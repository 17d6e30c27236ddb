"""
Tests for measurement-based expurgation and its stop criteria.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Try importing directly first (if package is installed)
try:
    from qeclab.circuits import GateEnsemble, Geometry, apply_random_circuit
    from qeclab.erasure import ErasureModel, ErasurePattern, recovery_probability, sample_erasure, zero_syndrome_logical_basis
    from qeclab.exceptions import InvalidArgumentError
    from qeclab.expurgation import (
        MeasurementOrder,
        StopCriteria,
        estimate_failure,
        expurgation_round,
        run_expurgation,
    )
    from qeclab.misc import make_rng
    from qeclab.stabilizer import SubsystemCode, distance_bruteforce, spread_logical_sites, trivial_code
except ImportError:
    # If not installed, add src to path
    test_dir = Path(__file__).parent
    src_dir = test_dir.parent / 'src'
    sys.path.insert(0, str(src_dir))
    from qeclab.circuits import GateEnsemble, Geometry, apply_random_circuit
    from qeclab.erasure import ErasureModel, ErasurePattern, recovery_probability, sample_erasure, zero_syndrome_logical_basis
    from qeclab.exceptions import InvalidArgumentError
    from qeclab.expurgation import (
        MeasurementOrder,
        StopCriteria,
        estimate_failure,
        expurgation_round,
        run_expurgation,
    )
    from qeclab.misc import make_rng
    from qeclab.stabilizer import SubsystemCode, distance_bruteforce, spread_logical_sites, trivial_code

# Import the test runner
try:
    from tests.test_runner import run_tests
except ImportError:
    from test_runner import run_tests


def random_code(n_qubits: int, k: int, depth: int, seed: int) -> SubsystemCode:
    code = trivial_code(n_qubits, spread_logical_sites(n_qubits, k))
    apply_random_circuit(code, Geometry.all_to_all(n_qubits), GateEnsemble.CLIFFORD_2Q, depth,
                         np.random.default_rng(seed))
    return code


def test_stop_criteria_needs_a_criterion():
    with pytest.raises(InvalidArgumentError):
        StopCriteria()
    with pytest.raises(InvalidArgumentError):
        StopCriteria(max_rounds=3, samples=0)
    assert StopCriteria(max_rounds=3).max_rounds == 3


def test_stop_criteria_budget():
    stop = StopCriteria.with_budget(4, 8, 0.25, max_rounds=10)
    assert stop.min_logicals == 2
    assert StopCriteria.with_budget(4, 8, 0.0, max_rounds=10).min_logicals is None
    with pytest.raises(InvalidArgumentError):
        StopCriteria.with_budget(4, 8, 0.0)


def test_round_on_unencoded_code_stabilizer_mode():
    code = trivial_code(8, [1, 3, 5, 7])
    pattern = ErasurePattern.of([1, 3, 4])
    code, removed = expurgation_round(code, pattern, "stabilizer", make_rng(0))
    # one operator per erased logical site; site 4 only carries a stabilizer
    assert removed == 2
    assert code.n_logical == 2
    assert code.n_stabilizers == 6
    assert code.n_gauge == 0
    code.check_invariants()


def test_round_on_unencoded_code_gauge_mode():
    code = trivial_code(8, [1, 3, 5, 7])
    code, removed = expurgation_round(code, ErasurePattern.of([1, 3, 4]), "gauge", make_rng(0))
    assert removed == 2
    assert code.n_logical == 2
    assert code.n_stabilizers == 4
    assert code.n_gauge == 2
    code.check_invariants()


def test_round_clears_the_pattern():
    for mode in ("stabilizer", "gauge"):
        for order in (MeasurementOrder.WEIGHT, MeasurementOrder.INDEX):
            code = random_code(16, 8, 40, seed=3)
            rng = make_rng(11)
            pattern = sample_erasure(ErasureModel.fixed(5), 16, rng)
            before = recovery_probability(code, pattern)
            k0, ns0 = code.n_logical, code.n_stabilizers
            code, removed = expurgation_round(code, pattern, mode, rng, order)
            assert removed <= before.r_m
            assert (removed > 0) == (before.r_m > 0)
            assert zero_syndrome_logical_basis(code, pattern) == []
            assert recovery_probability(code, pattern).probability == 1.0
            assert code.n_logical == k0 - removed
            if mode == "stabilizer":
                assert code.n_stabilizers == ns0 + removed
            else:
                assert code.n_gauge == removed
            code.check_invariants()


def test_round_without_erasure_is_a_no_op():
    code = random_code(8, 4, 16, seed=5)
    before = code.copy()
    code, removed = expurgation_round(code, ErasurePattern.of([]), "stabilizer", make_rng(0))
    assert removed == 0
    assert code == before


def test_distance_does_not_decrease():
    for mode in ("stabilizer", "gauge"):
        code = random_code(8, 4, 24, seed=7)
        d0 = distance_bruteforce(code)
        rng = make_rng(2)
        for _ in range(3):
            if code.n_logical <= 1:
                break
            pattern = sample_erasure(ErasureModel.fixed(2), 8, rng)
            code, _ = expurgation_round(code, pattern, mode, rng)
        if code.n_logical > 0:
            assert distance_bruteforce(code) >= d0


def test_run_stops_on_max_rounds():
    code = random_code(8, 4, 16, seed=1)
    code, trace = run_expurgation(code, ErasureModel.fixed(0), "gauge", StopCriteria(max_rounds=3), make_rng(0))
    assert trace.stop_reason == "max_rounds"
    assert len(trace) == 3
    assert trace.ks() == [4, 4, 4]
    assert not trace.failed


def test_run_stops_on_rate():
    code = trivial_code(8, [1, 3, 5, 7])
    stop = StopCriteria(min_rate=0.25, max_rounds=500)
    code, trace = run_expurgation(code, ErasureModel.fixed(2), "stabilizer", stop, make_rng(4))
    assert trace.stop_reason == "min_rate"
    assert code.n_logical in (1, 2)
    ks = [4] + trace.ks()
    assert all(a >= b for a, b in zip(ks, ks[1:]))


def test_run_stops_on_budget():
    code = trivial_code(8, [1, 3, 5, 7])
    stop = StopCriteria.with_budget(4, 8, 0.125, max_rounds=500)
    code, trace = run_expurgation(code, ErasureModel.fixed(1), "gauge", stop, make_rng(9))
    assert trace.stop_reason == "budget"
    assert code.n_logical == 3


def test_run_stops_when_nothing_is_left_to_expurgate():
    # without an erasure no round measures anything, so neither rate nor budget can fire
    for stop in (StopCriteria(min_rate=0.1), StopCriteria(min_logicals=1, max_idle_rounds=5)):
        code = trivial_code(8, [0, 2, 4, 6])
        code, trace = run_expurgation(code, ErasureModel.fixed(0), "gauge", stop, make_rng(3))
        assert trace.stop_reason == "idle"
        assert len(trace) == stop.max_idle_rounds
        assert trace.ks() == [4] * stop.max_idle_rounds
        assert not trace.failed
    with pytest.raises(InvalidArgumentError):
        StopCriteria(min_rate=0.1, max_idle_rounds=0)


def test_run_flags_failure_when_no_logicals_remain():
    code = trivial_code(4, [1, 3])
    code, trace = run_expurgation(code, ErasureModel.fixed(4), "stabilizer", StopCriteria(max_rounds=5), make_rng(0))
    assert trace.failed
    assert "failed" in trace.stop_reason
    assert code.n_logical == 0
    assert len(trace) == 1


def test_run_stops_on_failure_bound():
    code = random_code(8, 4, 16, seed=6)
    stop = StopCriteria(max_failure=0.05, max_rounds=5, samples=200)
    code, trace = run_expurgation(code, ErasureModel.fixed(0), "gauge", stop, make_rng(0))
    assert trace.stop_reason == "max_failure"
    assert trace.records[0].failure == 0.0
    assert trace.records[0].failure_upper < 0.05


def test_trace_seeds_replay_the_patterns():
    code = random_code(16, 8, 32, seed=8)
    model = ErasureModel.fixed(3)
    code, trace = run_expurgation(code, model, "stabilizer", StopCriteria(max_rounds=4), make_rng(21))
    for record in trace.records:
        assert sample_erasure(model, 16, make_rng(record.pattern_seed)).n_erased == record.n_erased == 3
        assert record.code_entropy == record.k


def test_estimate_failure_extremes():
    code = trivial_code(4, [1, 3])
    # erasing every site leaves a 1/16 chance of guessing both logical qubits
    failure, upper = estimate_failure(code, ErasureModel.fixed(4), 50, make_rng(0))
    assert failure > 0.5 and upper >= failure
    failure, upper = estimate_failure(code, ErasureModel.fixed(0), 50, make_rng(0))
    assert failure == 0.0 and 0.0 < upper < 0.1


if __name__ == "__main__":
    run_tests("Testing expurgation")
