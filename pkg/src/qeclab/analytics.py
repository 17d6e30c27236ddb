"""
Closed-form predictions for random stabilizer codes under erasure.

The random-matrix (RMT) model treats the stabilizer part M_S of the syndrome
matrix as a uniformly random 2n_e x n_s binary matrix. Every combinatorial
quantity is summed in the log2 domain; raw counts such as 2^(2 n_e n_s)
overflow long before desk-scale sizes.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import erfc
from scipy.stats import binom

from qeclab.constants import LOG_FAILURE_CAP, RC_SERIES_TERMS
from qeclab.exceptions import DomainError, InvalidArgumentError

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class RmtParams:
    n_e: int
    n_s: int

    def __post_init__(self):
        if self.n_e < 0 or self.n_s < 0:
            raise InvalidArgumentError(f"counts must be >= 0, got n_e={self.n_e}, n_s={self.n_s}")

    @property
    def delta(self) -> int:
        """Signed distance 2 n_e - n_s from the critical point."""
        return 2 * self.n_e - self.n_s


@dataclass(frozen=True)
class BlockModelParams:
    """N qubits in independent blocks of N_b, iid erasure rate e, code rate R."""

    n_qubits: int
    block_size: int
    erasure_rate: float
    rate: float

    def __post_init__(self):
        if self.block_size < 1 or self.n_qubits % self.block_size:
            raise InvalidArgumentError(f"block size {self.block_size} must divide {self.n_qubits}")
        if not 0.0 < self.erasure_rate < 1.0:
            raise InvalidArgumentError(f"erasure rate must lie in (0, 1), got {self.erasure_rate}")
        if not 0.0 <= self.rate <= 1.0:
            raise InvalidArgumentError(f"rate must lie in [0, 1], got {self.rate}")

    @property
    def critical_rate(self) -> float:
        return capacity_erasure_rate(self.rate)

    @property
    def sigma_b(self) -> float:
        e = self.erasure_rate
        return math.sqrt(e * (1.0 - e) * self.block_size)

    @property
    def n_blocks(self) -> int:
        return self.n_qubits // self.block_size


def capacity_erasure_rate(rate: float) -> float:
    """Critical erasure rate e_c = (1 - R) / 2 of optimal rate-R codes."""
    if not 0.0 <= rate <= 1.0:
        raise InvalidArgumentError(f"rate must lie in [0, 1], got {rate}")
    return (1.0 - rate) / 2.0


def _log2_one_minus_pow2(exponents: np.ndarray) -> np.ndarray:
    """log2(1 - 2^x) for x < 0."""
    return np.log1p(-np.exp2(exponents)) / _LN2


def _rank_log_counts(a: int, b: int) -> np.ndarray:
    """log2 of the number of a x b binary matrices of rank m, for m = 0..min(a, b)."""
    top = min(a, b)
    k = np.arange(top, dtype=np.float64)
    per_k = a + b + _log2_one_minus_pow2(k - a) + _log2_one_minus_pow2(k - b)
    numerator = np.concatenate([[0.0], np.cumsum(per_k)])
    m = np.arange(top + 1, dtype=np.float64)
    # sum_{k<m} log2(2^m - 2^k) = m^2 + sum_{j=1..m} log2(1 - 2^-j)
    tail = np.concatenate([[0.0], np.cumsum(_log2_one_minus_pow2(-np.arange(1, top + 1, dtype=np.float64)))])
    return numerator - (m * m + tail)


def count_rank_matrices_log2(rows: int, cols: int, m: int) -> float:
    """
    log2 of the number of ``rows`` x ``cols`` binary matrices with rank ``m``.

    Raises:
        InvalidArgumentError: if m is negative or exceeds min(rows, cols)
    """
    if rows < 0 or cols < 0 or not 0 <= m <= min(rows, cols):
        raise InvalidArgumentError(f"rank {m} impossible for a {rows}x{cols} matrix")
    return float(_rank_log_counts(rows, cols)[m])


def _rank_distribution(n_e: int, n_s: int):
    """(m values, probability that a uniform 2n_e x n_s matrix has rank m)."""
    a = 2 * n_e
    log_counts = _rank_log_counts(a, n_s)
    m = np.arange(log_counts.size)
    return m, np.exp2(log_counts - float(a) * n_s)


@lru_cache(maxsize=65536)
def rmt_recovery(n_e: int, n_s: int) -> float:
    """Average optimal recovery probability sum_m P(rank M_S = m) 2^(m - 2n_e)."""
    RmtParams(n_e, n_s)
    m, w = _rank_distribution(n_e, n_s)
    return min(1.0, math.fsum(w * np.exp2(m - 2.0 * n_e)))


@lru_cache(maxsize=65536)
def rmt_failure(n_e: int, n_s: int) -> float:
    """
    1 - rmt_recovery, summed term by term so tiny failures keep full precision.
    """
    RmtParams(n_e, n_s)
    m, w = _rank_distribution(n_e, n_s)
    return max(0.0, math.fsum(w * -np.expm1((m - 2.0 * n_e) * _LN2)))


def rmt_mean_rank_excess(n_e: int, n_s: int) -> float:
    """RMT mean of r_M = 2 n_e - rank(M_S) when M has full row rank."""
    RmtParams(n_e, n_s)
    m, w = _rank_distribution(n_e, n_s)
    return math.fsum(w * (2 * n_e - m))


@lru_cache(maxsize=1)
def critical_recovery_constant() -> float:
    """r_c, the N -> infinity recovery probability at 2 n_e = n_s."""
    k = np.arange(1, RC_SERIES_TERMS + 1, dtype=np.float64)
    log_norm = np.sum(np.log1p(-np.exp2(-k)))
    total = []
    for m in range(RC_SERIES_TERMS + 1):
        log_num = 2.0 * np.sum(np.log1p(-np.exp2(-(m + k))))
        total.append(math.exp(log_num - log_norm - m * (m + 1) * _LN2))
    return math.fsum(total)


def rmt_failure_asymptotic(delta: int) -> float:
    """Leading-order failure probability at distance delta = 2 n_e - n_s from criticality."""
    if delta < 0:
        return 2.0 ** (-abs(delta) - 1)
    if delta == 0:
        return 1.0 - critical_recovery_constant()
    return 1.0 - 2.0 ** (-delta)


def iid_scaling(x: float, e: float) -> float:
    """
    Scaling function f(x, e) with -<log2 P(F)> ≈ sqrt(N) f(x, e) for iid erasures.

    x = (e - e_c) sqrt(N) / sqrt(e (1 - e)).
    """
    if not 0.0 < e < 1.0:
        raise InvalidArgumentError(f"erasure rate must lie in (0, 1), got {e}")
    return math.sqrt(e * (1.0 - e)) * (
        math.exp(-x * x / 2.0) / math.sqrt(math.pi / 2.0) - x * float(erfc(x / math.sqrt(2.0)))
    )


def iid_failure_exact(n_qubits: int, n_s: int, e: float, cap: float = LOG_FAILURE_CAP) -> float:
    """
    E[-log2 P(F | n_e)] over n_e ~ Binomial(N, e), with exact RMT failures.

    Failures that underflow (including P(F) = 0 at n_e = 0) count as ``cap`` bits.
    """
    if not 0.0 <= e <= 1.0:
        raise InvalidArgumentError(f"erasure rate must lie in [0, 1], got {e}")
    n_e = np.arange(n_qubits + 1)
    weights = binom.pmf(n_e, n_qubits, e)
    bits = np.empty(n_e.size)
    for i, ne in enumerate(n_e):
        if weights[i] == 0.0:
            bits[i] = 0.0
            continue
        f = rmt_failure(int(ne), n_s)
        bits[i] = cap if f <= 0.0 else min(cap, -math.log2(f))
    return math.fsum(weights * bits)


def block_model_failure(params: BlockModelParams) -> float:
    """
    Gaussian block-model estimate (N / 2N_b) <2^-delta_i>, clamped to [0, 1].

    Raises:
        DomainError: if e >= e_c, where the estimate does not apply
    """
    e, e_c, nb = params.erasure_rate, params.critical_rate, params.block_size
    if e >= e_c:
        raise DomainError(f"block model needs e < e_c = {e_c:g}, got e = {e:g}")
    mean = 2.0 ** (2.0 * (e - e_c) * nb) / (math.sqrt(2.0 * math.pi * e * (1.0 - e) * nb) * math.log(4.0))
    return min(1.0, max(0.0, params.n_qubits / (2.0 * nb) * mean))


def block_model_recovery_rmt(params: BlockModelParams) -> float:
    """
    Product of independent per-block RMT recoveries, each averaged over a
    Binomial(N_b, e) erasure count with round((1 - R) N_b) stabilizers.
    """
    nb = params.block_size
    n_s = int(round((1.0 - params.rate) * nb))
    counts = np.arange(nb + 1)
    weights = binom.pmf(counts, nb, params.erasure_rate)
    per_block = math.fsum(w * rmt_recovery(int(c), n_s) for c, w in zip(counts, weights))
    return per_block ** params.n_blocks


def ising_surface_estimate(n_e: int, n_s: int, rate: float, n_qubits: int) -> float:
    """Minimal-surface estimate of I(R':E'): 0, then 2n_e - n_s, then 2RN."""
    two_ne = 2 * n_e
    if two_ne <= n_s:
        return 0.0
    if two_ne <= (1.0 + rate) * n_qubits:
        return float(two_ne - n_s)
    return 2.0 * rate * n_qubits
