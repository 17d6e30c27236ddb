"""
Erasure models and the optimal erasure decoder.

For an erasure pattern e the syndrome matrix M has two rows per erased site
(single-site Z then X) and one column per stabilizer followed by one per
logical generator (X1, Z1, X2, Z2, ...). Entry (row, col) is the commutator
bit of the single-site error with that generator. Optimal recovery succeeds
with probability 2^-r_M where r_M = rank(M) - rank(M_S).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from qeclab.constants import MAX_BRUTE_FORCE_ERASURES
from qeclab.exceptions import InvalidArgumentError, NoSolutionError, ResourceLimitError
from qeclab.gf2 import BitMatrix, BitVector, rank, rank_pair, reduce_with_tracking, solve_left
from qeclab.pauli import PauliOperator, PauliTable
from qeclab.stabilizer import SubsystemCode

logger = logging.getLogger(__name__)


class ErasureKind(Enum):
    FIXED = "fixed"
    IID = "iid"
    REGULAR = "regular"


@dataclass(frozen=True)
class ErasureModel:
    """How erased sites are chosen: a fixed count, iid per site, or a regular comb."""

    kind: ErasureKind
    n_erased: int = 0
    probability: float = 0.0
    spacing: int = 0

    def __post_init__(self):
        if self.n_erased < 0:
            raise InvalidArgumentError(f"erasure count must be >= 0, got {self.n_erased}")
        if not 0.0 <= self.probability <= 1.0:
            raise InvalidArgumentError(f"erasure probability must lie in [0, 1], got {self.probability}")
        if self.kind is ErasureKind.REGULAR and self.spacing < 1:
            raise InvalidArgumentError(f"regular spacing must be >= 1, got {self.spacing}")

    @staticmethod
    def fixed(n_erased: int) -> "ErasureModel":
        return ErasureModel(ErasureKind.FIXED, n_erased=n_erased)

    @staticmethod
    def iid(probability: float) -> "ErasureModel":
        return ErasureModel(ErasureKind.IID, probability=probability)

    @staticmethod
    def regular(spacing: int = 4) -> "ErasureModel":
        return ErasureModel(ErasureKind.REGULAR, spacing=spacing)

    @staticmethod
    def fixed_from_delta(delta: int, n_stabilizers: int) -> "ErasureModel":
        """Fixed count with 2 n_e - n_s = delta."""
        if (n_stabilizers + delta) % 2:
            raise InvalidArgumentError(f"delta {delta} has the wrong parity for n_s = {n_stabilizers}")
        return ErasureModel.fixed((n_stabilizers + delta) // 2)

    def validate(self, n_qubits: int):
        if self.kind is ErasureKind.FIXED and self.n_erased > n_qubits:
            raise InvalidArgumentError(f"cannot erase {self.n_erased} of {n_qubits} sites")
        if self.kind is ErasureKind.REGULAR and n_qubits % self.spacing:
            raise InvalidArgumentError(f"spacing {self.spacing} does not divide {n_qubits}")

    def __str__(self):
        if self.kind is ErasureKind.FIXED:
            return f"fixed(n_e={self.n_erased})"
        if self.kind is ErasureKind.IID:
            return f"iid(e={self.probability:g})"
        return f"regular(spacing={self.spacing})"


@dataclass(frozen=True)
class ErasurePattern:
    """Sorted, duplicate-free erased sites."""

    sites: Tuple[int, ...]

    @staticmethod
    def of(sites: Sequence[int]) -> "ErasurePattern":
        s = tuple(sorted(int(i) for i in sites))
        if len(set(s)) != len(s):
            raise InvalidArgumentError(f"duplicate erased sites in {s}")
        return ErasurePattern(s)

    @property
    def n_erased(self) -> int:
        return len(self.sites)

    def check(self, n_qubits: int):
        if self.sites and (self.sites[0] < 0 or self.sites[-1] >= n_qubits):
            raise InvalidArgumentError(f"erased sites must lie in [0, {n_qubits})")


class SyndromeMatrix(NamedTuple):
    m: BitMatrix
    split: int  # n_s, first logical column

    @property
    def stabilizer_part(self) -> BitMatrix:
        return self.m.take_columns(range(self.split))


class Recovery(NamedTuple):
    probability: float
    r_m: int
    coherent_information: int


class ProbeReport(NamedTuple):
    d: np.ndarray          # d_i in {0, 1, 2} per probe
    flags: np.ndarray      # d_i > 0
    joint_d: int           # rank over the union of probe columns

    @property
    def joint_flag(self) -> bool:
        return bool(self.flags.any())


def sample_erasure(model: ErasureModel, n_qubits: int, rng: np.random.Generator) -> ErasurePattern:
    """Draw one erasure pattern on ``n_qubits`` sites."""
    model.validate(n_qubits)
    if model.kind is ErasureKind.FIXED:
        sites = rng.choice(n_qubits, size=model.n_erased, replace=False)
    elif model.kind is ErasureKind.IID:
        sites = np.flatnonzero(rng.random(n_qubits) < model.probability)
    else:
        offset = int(rng.integers(model.spacing))
        sites = np.arange(offset, n_qubits, model.spacing)
    return ErasurePattern.of(sites)


def syndrome_matrix(code: SubsystemCode, pattern: ErasurePattern) -> SyndromeMatrix:
    """
    Rows (Z_i1, X_i1, Z_i2, X_i2, ...) against columns (stabilizers | logicals).

    Gauge generators contribute no columns.
    """
    pattern.check(code.n_qubits)
    gens = PauliTable.concatenate([code.stabilizers(), code.logicals()])
    cols = np.array(pattern.sites, dtype=np.intp)
    # Z_i anticommutes with generators carrying X on site i, X_i with those carrying Z
    z_rows = gens.x[:, cols].T
    x_rows = gens.z[:, cols].T
    bits = np.stack([z_rows, x_rows], axis=1).reshape(2 * cols.size, len(gens))
    return SyndromeMatrix(BitMatrix.from_bits(bits), code.n_stabilizers)


def recovery_probability(code: SubsystemCode, pattern: ErasurePattern) -> Recovery:
    """
    Optimal recovery probability 2^-r_M, with r_M and the coherent information k - r_M.
    """
    sm = syndrome_matrix(code, pattern)
    full, left = rank_pair(sm.m, sm.split)
    r_m = full - left
    return Recovery(2.0 ** -r_m, r_m, code.n_logical - r_m)


def pattern_pauli(n_qubits: int, sites: Sequence[int], coefficients) -> PauliOperator:
    """Product of the syndrome-matrix row errors selected by ``coefficients``."""
    c = np.asarray(coefficients, dtype=np.uint8).reshape(-1, 2)
    x = np.zeros(n_qubits, dtype=np.uint8)
    z = np.zeros(n_qubits, dtype=np.uint8)
    idx = np.asarray(sites, dtype=np.intp)
    z[idx] = c[:, 0]
    x[idx] = c[:, 1]
    return PauliOperator.from_bits(x, z)


def _zero_syndrome_rows(sm: SyndromeMatrix):
    """Reduced rows whose pivot is a logical column, with their row combinations."""
    reduced, combos, pivots = reduce_with_tracking(sm.m)
    keep = [i for i, p in enumerate(pivots) if p >= sm.split]
    return reduced.to_bits()[keep], combos.to_bits()[keep]


def zero_syndrome_logical_basis(code: SubsystemCode, pattern: ErasurePattern) -> List[PauliOperator]:
    """
    r_M independent errors on the erased sites with zero syndrome and logical content.
    """
    sm = syndrome_matrix(code, pattern)
    if sm.m.n_rows == 0:
        return []
    _, combos = _zero_syndrome_rows(sm)
    return [pattern_pauli(code.n_qubits, pattern.sites, c) for c in combos]


def probe_failures(code: SubsystemCode, pattern: ErasurePattern, probes: Sequence[int]) -> ProbeReport:
    """
    Which probed logical pairs lose information to the erasure.

    d_i is the rank of the zero-syndrome logical span projected on the two
    columns of logical pair i; d_i > 0 flags a loss for probe i.
    """
    probes = [int(p) for p in probes]
    if any(not 0 <= p < code.n_logical for p in probes):
        raise InvalidArgumentError(f"probe indices must lie in [0, {code.n_logical})")
    sm = syndrome_matrix(code, pattern)
    if sm.m.n_rows == 0:
        zeros = np.zeros(len(probes), dtype=np.int64)
        return ProbeReport(zeros, zeros.astype(bool), 0)
    rows, _ = _zero_syndrome_rows(sm)
    logical_part = rows[:, sm.split:]
    d = np.array(
        [rank(BitMatrix.from_bits(logical_part[:, 2 * p:2 * p + 2])) for p in probes],
        dtype=np.int64,
    )
    union = [c for p in probes for c in (2 * p, 2 * p + 1)]
    joint = rank(BitMatrix.from_bits(logical_part[:, union])) if union else 0
    return ProbeReport(d, d > 0, joint)


def brute_force_recovery(code: SubsystemCode, pattern: ErasurePattern) -> float:
    """
    Recovery probability by enumerating all 4^n_e Pauli errors on the erased sites.

    Each error is built as a full N-qubit Pauli and checked against the
    stabilizer and logical generators of the code directly, independent of
    the syndrome-matrix layout. Errors are grouped by syndrome and then by
    logical class; the decoder guesses the largest class.

    Raises:
        ResourceLimitError: if more than MAX_BRUTE_FORCE_ERASURES sites are erased
    """
    n_e = pattern.n_erased
    if n_e > MAX_BRUTE_FORCE_ERASURES:
        raise ResourceLimitError(f"brute-force recovery limited to {MAX_BRUTE_FORCE_ERASURES} erasures, got {n_e}")
    if n_e == 0 or code.n_logical == 0:
        return 1.0
    pattern.check(code.n_qubits)
    n_s = code.n_stabilizers
    total = 4 ** n_e
    letters = (np.arange(total)[:, None] >> (2 * np.arange(n_e))[None, :]) & 3
    sites = np.array(pattern.sites, dtype=np.intp)
    x = np.zeros((total, code.n_qubits), dtype=np.uint8)
    z = np.zeros((total, code.n_qubits), dtype=np.uint8)
    x[:, sites] = letters & 1
    z[:, sites] = letters >> 1
    errors = PauliTable(x, z)
    syndromes = errors.commutation_matrix(code.stabilizers())
    actions = errors.commutation_matrix(code.logicals())
    classes, counts = np.unique(np.hstack([syndromes, actions]), axis=0, return_counts=True)
    if n_s == 0:
        return counts.max() / total
    _, group = np.unique(classes[:, :n_s], axis=0, return_inverse=True)
    best = np.zeros(group.max() + 1, dtype=np.int64)
    np.maximum.at(best, group.reshape(-1), counts)
    return best.sum() / total


def most_likely_correction(code: SubsystemCode, pattern: ErasurePattern, syndrome) -> PauliOperator:
    """
    A Pauli on the erased sites producing ``syndrome`` against the stabilizers.

    Raises:
        NoSolutionError: if no error on the erased sites has this syndrome
    """
    target = np.asarray(syndrome, dtype=np.uint8).reshape(-1)
    if target.size != code.n_stabilizers:
        raise InvalidArgumentError(f"syndrome has {target.size} bits, code has {code.n_stabilizers} stabilizers")
    if pattern.n_erased == 0:
        if target.any():
            raise NoSolutionError("nonzero syndrome with nothing erased")
        return PauliOperator.identity(code.n_qubits)
    sm = syndrome_matrix(code, pattern)
    coeffs = solve_left(sm.stabilizer_part, BitVector.from_bits(target))
    return pattern_pauli(code.n_qubits, pattern.sites, coeffs.to_bits())
