"""
End-to-end checks of simulated codes against the analytic predictions.

Most of these take minutes and are marked slow; run them with
``pytest -m slow``.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Try importing directly first (if package is installed)
try:
    from qeclab import analytics
    from qeclab.circuits import GateEnsemble, Geometry, apply_random_circuit
    from qeclab.config import ExperimentConfig
    from qeclab.erasure import ErasureModel, brute_force_recovery, recovery_probability, sample_erasure
    from qeclab.experiments import run_experiment
    from qeclab.expurgation import expurgation_round
    from qeclab.haar import haar_erasure_trial
    from qeclab.misc import make_rng
    from qeclab.stabilizer import distance_bruteforce, spread_logical_sites, trivial_code
except ImportError:
    # If not installed, add src to path
    test_dir = Path(__file__).parent
    src_dir = test_dir.parent / 'src'
    sys.path.insert(0, str(src_dir))
    from qeclab import analytics
    from qeclab.circuits import GateEnsemble, Geometry, apply_random_circuit
    from qeclab.config import ExperimentConfig
    from qeclab.erasure import ErasureModel, brute_force_recovery, recovery_probability, sample_erasure
    from qeclab.experiments import run_experiment
    from qeclab.expurgation import expurgation_round
    from qeclab.haar import haar_erasure_trial
    from qeclab.misc import make_rng
    from qeclab.stabilizer import distance_bruteforce, spread_logical_sites, trivial_code

# Import the test runner
try:
    from tests.test_runner import run_tests
except ImportError:
    from test_runner import run_tests


def random_instance(rng, geometry: str = "all2all"):
    n = int(rng.choice([4, 6, 8]))
    k = int(rng.integers(1, n // 2 + 1))
    code = trivial_code(n, spread_logical_sites(n, k))
    depth = int(rng.integers(0, 9))
    apply_random_circuit(code, Geometry.build(geometry, n), GateEnsemble.CLIFFORD_2Q, depth, rng)
    return code


def test_rank_decoder_matches_brute_force():
    rng = make_rng(2024)
    for i in range(500):
        code = random_instance(rng, "all2all" if i % 2 else "chain1d")
        pattern = sample_erasure(ErasureModel.fixed(int(rng.integers(0, 4))), code.n_qubits, rng)
        assert recovery_probability(code, pattern).probability == brute_force_recovery(code, pattern)


@pytest.mark.slow
def test_expurgation_never_hurts():
    rng = make_rng(7)
    for i in range(500):
        mode = "stabilizer" if i % 2 else "gauge"
        code = random_instance(rng)
        n = code.n_qubits
        held_out = sample_erasure(ErasureModel.fixed(2), n, rng)
        d0 = distance_bruteforce(code)
        p0 = brute_force_recovery(code, held_out)
        pattern = sample_erasure(ErasureModel.fixed(int(rng.integers(1, 4))), n, rng)
        code, _ = expurgation_round(code, pattern, mode, rng)
        if code.n_logical == 0:
            continue
        assert distance_bruteforce(code) >= d0
        assert brute_force_recovery(code, held_out) >= p0


@pytest.mark.slow
def test_chain_at_criticality_matches_rmt():
    config = ExperimentConfig("rmt-sweep", sizes=(40,), depth_factor=2.0, deltas=(0,), trials=40000,
                              master_seed=11, threads=-1)
    records = run_experiment(config)
    mass = next(r for r in records if r.statistic == "failure_mass")
    assert 1.0 - mass.value == pytest.approx(analytics.rmt_recovery(10, 20), abs=0.01)


@pytest.mark.slow
def test_chain_sweep_follows_rmt_curve():
    config = ExperimentConfig("rmt-sweep", sizes=(16, 32), depth_factor=2.0, deltas=(-4, -2, 0, 2, 4),
                              trials=2000, master_seed=5, threads=-1)
    records = run_experiment(config)
    mass = {(r.n_qubits, r.point): r for r in records if r.statistic == "failure_mass"}
    rmt = {(r.n_qubits, r.point): r.value for r in records if r.statistic == "p_fail_rmt"}
    assert len(mass) == 10
    for key, r in mass.items():
        assert abs(r.value - rmt[key]) <= 4 * max(r.stderr, 1e-3)


@pytest.mark.slow
def test_haar_information_grows_with_erasure():
    rng = make_rng(13)
    n, k = 12, 6
    low = [haar_erasure_trial(n, k, sample_erasure(ErasureModel.fixed(1), n, rng), rng).i_re for _ in range(20)]
    high = [haar_erasure_trial(n, k, sample_erasure(ErasureModel.fixed(5), n, rng), rng).i_re for _ in range(20)]
    assert np.mean(low) < 0.1
    assert np.mean(high) > 1.0


if __name__ == "__main__":
    run_tests("Testing acceptance criteria")
