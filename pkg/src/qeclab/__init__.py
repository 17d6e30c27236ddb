"""
qeclab - erasure decoding of random Clifford encoding circuits.

A package for building random stabilizer and subsystem codes with
geometrically local Clifford circuits, decoding erasures optimally with
GF(2) linear algebra, expurgating low-weight logical operators and comparing
the results against random-matrix and Haar-random predictions.
"""

__version__ = "0.1.0"

from qeclab.clifford import CliffordGate
from qeclab.circuits import DepthSchedule, GateEnsemble, Geometry, apply_random_circuit, layer_schedule
from qeclab.config import ExperimentConfig, load_config
from qeclab.erasure import (
    ErasureModel,
    ErasurePattern,
    brute_force_recovery,
    probe_failures,
    recovery_probability,
    sample_erasure,
    syndrome_matrix,
    zero_syndrome_logical_basis,
)
from qeclab.exceptions import (
    ConfigError,
    DomainError,
    InvalidArgumentError,
    InvariantError,
    NoCrossingError,
    NoSolutionError,
    QecLabError,
    ResourceLimitError,
    SingularFitError,
)
from qeclab.experiments import run_experiment
from qeclab.expurgation import StopCriteria, expurgation_round, run_expurgation
from qeclab.gf2 import BitMatrix, BitVector, rank, rank_pair, row_reduce
from qeclab.pauli import PauliOperator, PauliTable
from qeclab.stabilizer import MeasurementMode, SubsystemCode, measure_pauli, trivial_code

__all__ = [
    "BitMatrix", "BitVector", "rank", "rank_pair", "row_reduce",
    "PauliOperator", "PauliTable",
    "CliffordGate",
    "SubsystemCode", "MeasurementMode", "measure_pauli", "trivial_code",
    "Geometry", "GateEnsemble", "DepthSchedule", "layer_schedule", "apply_random_circuit",
    "ErasureModel", "ErasurePattern", "sample_erasure", "syndrome_matrix", "recovery_probability",
    "zero_syndrome_logical_basis", "probe_failures", "brute_force_recovery",
    "StopCriteria", "expurgation_round", "run_expurgation",
    "ExperimentConfig", "load_config", "run_experiment",
    "QecLabError", "InvalidArgumentError", "DomainError", "ResourceLimitError", "NoSolutionError",
    "SingularFitError", "NoCrossingError", "ConfigError", "InvariantError",
]
