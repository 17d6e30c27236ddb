"""
Dense statevector simulation for Haar-random encodings and small-system oracles.

A state on N system qubits and k reference qubits is an amplitude array of
length 2^(N+k). Qubit q is tensor axis q (qubit 0 most significant); system
qubits come first, then the references.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from qeclab.constants import ENTROPY_EIGEN_FLOOR, MAX_DENSE_QUBITS, MAX_DENSE_UNITARY_QUBITS
from qeclab.erasure import ErasurePattern
from qeclab.exceptions import InvalidArgumentError, ResourceLimitError
from qeclab.pauli import PauliOperator, PauliTable
from qeclab.stabilizer import SubsystemCode, purified_state_generators, spread_logical_sites

logger = logging.getLogger(__name__)


@dataclass
class DenseState:
    """Pure state on system qubits 0..N-1 and reference qubits N..N+k-1."""

    amplitudes: np.ndarray
    n_system: int
    n_reference: int = 0

    def __post_init__(self):
        n = self.n_total
        if n > MAX_DENSE_QUBITS:
            raise ResourceLimitError(f"dense states limited to {MAX_DENSE_QUBITS} qubits, got {n}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != 2 ** n:
            raise InvalidArgumentError(f"{self.amplitudes.size} amplitudes for {n} qubits")

    @property
    def n_total(self) -> int:
        return self.n_system + self.n_reference

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_total)

    def apply_system_unitary(self, u: np.ndarray) -> "DenseState":
        """Apply a 2^N x 2^N unitary to the system, in place."""
        mat = self.amplitudes.reshape(2 ** self.n_system, 2 ** self.n_reference)
        self.amplitudes = (u @ mat).reshape(-1)
        return self

    def apply_two_qubit(self, u: np.ndarray, a: int, b: int) -> "DenseState":
        """Apply a 4x4 unitary to qubits (a, b), in place; a is the more significant factor."""
        psi = np.tensordot(u.reshape(2, 2, 2, 2), self.tensor(), axes=([2, 3], [a, b]))
        self.amplitudes = np.moveaxis(psi, [0, 1], [a, b]).reshape(-1)
        return self


class HaarTrialResult(NamedTuple):
    i_c: float
    i_re: float
    n_e: int
    n_qubits: int
    k: int
    seed: Optional[int] = None


def haar_unitary(num_qubits: int, rng: np.random.Generator) -> np.ndarray:
    """
    Haar-random unitary on ``num_qubits`` qubits.

    QR of a complex Gaussian matrix, with R's diagonal phases moved into Q.

    Raises:
        ResourceLimitError: above MAX_DENSE_UNITARY_QUBITS
    """
    if num_qubits > MAX_DENSE_UNITARY_QUBITS:
        raise ResourceLimitError(f"dense Haar unitaries limited to {MAX_DENSE_UNITARY_QUBITS} qubits, got {num_qubits}")
    dim = 2 ** num_qubits
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))[None, :]


def apply_local_haar_circuit(state: DenseState, depth: int, rng: np.random.Generator) -> DenseState:
    """Brickwork of two-qubit Haar gates on the periodic system chain."""
    n = state.n_system
    for layer in range(depth):
        for i in range(layer % 2, n - 1 + (layer % 2), 2):
            a, b = i % n, (i + 1) % n
            if a != b:
                state.apply_two_qubit(haar_unitary(2, rng), a, b)
    return state


def bell_input_state(n_qubits: int, k: int, logical_sites: Sequence[int] = None) -> DenseState:
    """k Bell pairs between reference j and logical site j; other system qubits in |0>."""
    sites = spread_logical_sites(n_qubits, k) if logical_sites is None else list(logical_sites)
    if len(sites) != k:
        raise InvalidArgumentError(f"need {k} logical sites, got {len(sites)}")
    total = n_qubits + k
    if total > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"dense states limited to {MAX_DENSE_QUBITS} qubits, got {total}")
    amps = np.zeros((2,) * total, dtype=complex)
    for bits in np.ndindex(*((2,) * k)):
        index = [0] * total
        for j, bit in enumerate(bits):
            index[sites[j]] = bit
            index[n_qubits + j] = bit
        amps[tuple(index)] = 2.0 ** (-k / 2.0)
    return DenseState(amps, n_qubits, k)


def subsystem_entropy(state: DenseState, subset: Sequence[int]) -> float:
    """
    Von Neumann entropy in bits of the reduced state on ``subset``.

    The global state is pure, so the smaller side is traced.
    """
    n = state.n_total
    subset = sorted(set(int(q) for q in subset))
    if any(not 0 <= q < n for q in subset):
        raise InvalidArgumentError(f"qubits must lie in [0, {n})")
    if len(subset) > n - len(subset):
        subset = [q for q in range(n) if q not in set(subset)]
    if not subset:
        return 0.0
    rest = [q for q in range(n) if q not in set(subset)]
    m = np.transpose(state.tensor(), subset + rest).reshape(2 ** len(subset), -1)
    rho = m @ m.conj().T
    w = np.linalg.eigvalsh(rho)
    w = w[w > ENTROPY_EIGEN_FLOOR]
    return float(-np.sum(w * np.log2(w)))


def _information_split(state: DenseState, pattern: ErasurePattern):
    erased = list(pattern.sites)
    kept = [q for q in range(state.n_system) if q not in set(erased)]
    i_c = subsystem_entropy(state, kept) - subsystem_entropy(state, erased)
    return i_c


def haar_erasure_trial(n_qubits: int, k: int, pattern: ErasurePattern, rng: np.random.Generator,
                       mode: str = "dense", depth: Optional[int] = None, seed: Optional[int] = None) -> HaarTrialResult:
    """
    Coherent information of a Haar-encoded code under one erasure pattern.

    I_c = S(Q') - S(e) and I(R':E') = k - I_c.

    Args:
        mode: "dense" for one N-qubit Haar unitary, "local" for a deep
            brickwork of two-qubit Haar gates (default depth N)
    """
    pattern.check(n_qubits)
    state = bell_input_state(n_qubits, k)
    if mode == "dense":
        state.apply_system_unitary(haar_unitary(n_qubits, rng))
    elif mode == "local":
        apply_local_haar_circuit(state, n_qubits if depth is None else depth, rng)
    else:
        raise InvalidArgumentError(f"unknown Haar mode '{mode}'")
    i_c = _information_split(state, pattern)
    return HaarTrialResult(i_c, k - i_c, pattern.n_erased, n_qubits, k, seed)


# -- stabilizer-state oracles ------------------------------------------


def _parity(values: np.ndarray) -> np.ndarray:
    v = values.astype(np.uint64)
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> np.uint64(shift)
    return (v & np.uint64(1)).astype(np.int64)


def _masks(x: np.ndarray, z: np.ndarray):
    n = x.size
    weights = 1 << (n - 1 - np.arange(n))
    return int(np.dot(x.astype(np.int64), weights)), int(np.dot(z.astype(np.int64), weights))


def apply_pauli(x: np.ndarray, z: np.ndarray, sign: int, vec: np.ndarray) -> np.ndarray:
    """Dense action of the Hermitian Pauli sign * i^(x.z) X^x Z^z on ``vec``."""
    xm, zm = _masks(x, z)
    idx = np.arange(vec.size, dtype=np.int64)
    phase = sign * (1j ** (bin(xm & zm).count("1") % 4)) * (1 - 2 * _parity(idx & zm))
    out = np.empty_like(vec)
    out[idx ^ xm] = phase * vec
    return out


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    """Dense 2^N x 2^N matrix of a Pauli operator."""
    dim = 2 ** p.n_qubits
    x, z = p.x.to_bits(), p.z.to_bits()
    return np.column_stack([apply_pauli(x, z, p.sign, col) for col in np.eye(dim, dtype=complex)])


def stabilizer_statevector(generators: PauliTable, rng: np.random.Generator = None) -> np.ndarray:
    """
    State vector stabilized by n independent commuting generators on n qubits.

    A random vector is projected with prod (1 + g) / 2 and normalized.
    """
    n = generators.n_qubits
    if len(generators) != n:
        raise InvalidArgumentError(f"need {n} generators for a pure state, got {len(generators)}")
    if n > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"dense states limited to {MAX_DENSE_QUBITS} qubits, got {n}")
    rng = np.random.default_rng(0) if rng is None else rng
    vec = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
    for i in range(n):
        vec = 0.5 * (vec + apply_pauli(generators.x[i], generators.z[i], int(generators.sign[i]), vec))
    norm = np.linalg.norm(vec)
    if norm < 1e-9:
        raise InvalidArgumentError("generators do not define a state")
    return vec / norm


def purified_state(code: SubsystemCode) -> DenseState:
    """Dense purification of ``code`` with one reference qubit per logical pair."""
    amps = stabilizer_statevector(purified_state_generators(code))
    return DenseState(amps, code.n_qubits, code.n_logical)


def clifford_erasure_trial(code: SubsystemCode, pattern: ErasurePattern, seed: Optional[int] = None) -> HaarTrialResult:
    """The Haar trial quantities for a stabilizer code, from its dense purification."""
    pattern.check(code.n_qubits)
    state = purified_state(code)
    i_c = _information_split(state, pattern)
    return HaarTrialResult(i_c, code.n_logical - i_c, pattern.n_erased, code.n_qubits, code.n_logical, seed)


def probe_mutual_information(code: SubsystemCode, pattern: ErasurePattern, probe: int) -> float:
    """I(R_probe : Q') on the dense purification, Q' being the unerased system."""
    if not 0 <= probe < code.n_logical:
        raise InvalidArgumentError(f"probe {probe} out of range for k = {code.n_logical}")
    state = purified_state(code)
    ref = [code.n_qubits + probe]
    kept = [q for q in range(code.n_qubits) if q not in set(pattern.sites)]
    return (subsystem_entropy(state, ref) + subsystem_entropy(state, kept)
            - subsystem_entropy(state, ref + kept))
