"""
Numerical constants, resource limits and exit codes for qeclab.

Conventions used throughout the package:
- Entropies and information quantities are in bits (log base 2).
- Pauli operators are written over {I, X, Y, Z} with Y = iXZ.
- A code's rate is R = k/N; erasure rates are fractions of sites.
"""

import os

# Critical RMT recovery probability at 2n_e = n_s, the N -> infinity limit
RC_RMT = 0.6103215180

# Truncation of the product/sum series for the critical constant
RC_SERIES_TERMS = 64

# Cap on -log2 P(F) when the failure probability underflows
LOG_FAILURE_CAP = 128.0

# Eigenvalues below this floor are dropped before taking logarithms
ENTROPY_EIGEN_FLOOR = 1e-14

# Resource guards
MAX_BRUTE_FORCE_ERASURES = 8      # 4^n_e enumeration in brute_force_recovery
MAX_DISTANCE_QUBITS = 12          # 4^N enumeration in distance_bruteforce
MAX_DENSE_QUBITS = 26             # statevector length 2^(N+k)
MAX_DENSE_UNITARY_QUBITS = 13     # dense Haar unitary on the whole system

# Group orders
CLIFFORD_2Q_ORDER = 11520         # two-qubit Cliffords modulo phase
SYMPLECTIC_4_ORDER = 720          # |Sp(4, 2)|
CLIFFORD_1Q_ORDER = 24

# Harness defaults
CSV_SCHEMA_VERSION = 1
DEFAULT_STOP_SAMPLES = 200
DEFAULT_CONFIDENCE = 0.95
DEFAULT_MAX_IDLE_ROUNDS = 25      # consecutive expurgation rounds that measure nothing

# CLI exit codes
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3
EXIT_NO_CROSSING = 4

# Invariant checks after every tableau mutation
DEBUG_INVARIANTS = os.environ.get("QECLAB_DEBUG", "") not in ("", "0")

# COLOUR CODES FOR TEST RESULTS
GREEN = "\033[92m"
RED = "\033[91m"
END = "\033[0m"
