"""
Measurement-based expurgation of low-weight logical operators.

Each round samples an erasure, finds the zero-syndrome errors with logical
content on the erased sites, and measures them one by one so that they turn
into stabilizers or gauge operators.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from qeclab.constants import DEFAULT_CONFIDENCE, DEFAULT_MAX_IDLE_ROUNDS, DEFAULT_STOP_SAMPLES
from qeclab.erasure import (
    ErasureModel,
    ErasurePattern,
    recovery_probability,
    sample_erasure,
    zero_syndrome_logical_basis,
)
from qeclab.exceptions import InvalidArgumentError
from qeclab.misc import make_rng, spawn_seed
from qeclab.pauli import PauliOperator
from qeclab.stabilizer import MeasurementMode, SubsystemCode, code_space_entropy
from qeclab.stats import wilson_interval

logger = logging.getLogger(__name__)

ExpurgationMode = MeasurementMode


class MeasurementOrder(Enum):
    WEIGHT = "weight"   # ascending weight, ties by bit pattern
    INDEX = "index"     # row-reduction order


@dataclass(frozen=True)
class StopCriteria:
    """
    When to stop expurgating. A criterion left as None is inactive.

    Attributes:
        min_rate: stop once k/N <= min_rate
        max_failure: stop once the upper confidence bound of the failure
            probability is <= max_failure
        max_rounds: stop after this many rounds
        min_logicals: stop once k <= min_logicals (fixed expurgation budget)
        samples: erasure draws per failure estimate
        confidence: confidence level of the Wilson bound
        max_idle_rounds: stop after this many consecutive rounds that
            measure nothing; None keeps going
    """

    min_rate: Optional[float] = None
    max_failure: Optional[float] = None
    max_rounds: Optional[int] = None
    min_logicals: Optional[int] = None
    samples: int = DEFAULT_STOP_SAMPLES
    confidence: float = DEFAULT_CONFIDENCE
    max_idle_rounds: Optional[int] = DEFAULT_MAX_IDLE_ROUNDS

    def __post_init__(self):
        if all(v is None for v in (self.min_rate, self.max_failure, self.max_rounds, self.min_logicals)):
            raise InvalidArgumentError("at least one stop criterion must be set")
        if self.samples < 1:
            raise InvalidArgumentError(f"samples must be >= 1, got {self.samples}")
        if self.max_idle_rounds is not None and self.max_idle_rounds < 1:
            raise InvalidArgumentError(f"max_idle_rounds must be >= 1, got {self.max_idle_rounds}")

    @staticmethod
    def with_budget(k0: int, n_qubits: int, offset: float, **kwargs) -> "StopCriteria":
        """Criteria that also stop once offset * N logicals have been removed."""
        budget = None if offset <= 0 else max(0, int(round(k0 - offset * n_qubits)))
        return StopCriteria(min_logicals=budget, **kwargs)


@dataclass(frozen=True)
class TraceRecord:
    round: int
    pattern_seed: int
    n_erased: int
    n_expurgated: int
    k: int
    code_entropy: int
    failure: Optional[float] = None
    failure_upper: Optional[float] = None


@dataclass
class ExpurgationTrace:
    records: List[TraceRecord] = field(default_factory=list)
    failed: bool = False
    stop_reason: str = ""

    def ks(self) -> List[int]:
        return [r.k for r in self.records]

    def __len__(self):
        return len(self.records)


def _weight_key(p: PauliOperator):
    x, z = p.x.to_bits(), p.z.to_bits()
    return (p.weight(), tuple(np.concatenate([x, z]).tolist()))


def expurgation_round(code: SubsystemCode, pattern: ErasurePattern, mode, rng: np.random.Generator,
                      order=MeasurementOrder.WEIGHT) -> Tuple[SubsystemCode, int]:
    """
    Measure every zero-syndrome logical error on ``pattern`` into the code.

    The basis is recomputed after each measurement, so every measured
    operator is still a logical error of the current code. ``code`` is
    updated in place.

    Returns:
        (code, number of operators measured)
    """
    mode = ExpurgationMode(mode)
    order = MeasurementOrder(order)
    n = 0
    while True:
        basis = zero_syndrome_logical_basis(code, pattern)
        if not basis:
            break
        g = min(basis, key=_weight_key) if order is MeasurementOrder.WEIGHT else basis[0]
        code.measure(g, rng, mode)
        n += 1
    if n:
        logger.debug("expurgated %d operators on %d erased sites, k=%d", n, pattern.n_erased, code.n_logical)
    return code, n


def estimate_failure(code: SubsystemCode, model: ErasureModel, samples: int, rng: np.random.Generator,
                     confidence: float = DEFAULT_CONFIDENCE) -> Tuple[float, float]:
    """
    Monte Carlo failure probability on fresh erasures with its Wilson upper bound.

    Each draw is a Bernoulli trial that succeeds with the optimal recovery
    probability of the sampled pattern.
    """
    failures = 0
    for _ in range(samples):
        pattern = sample_erasure(model, code.n_qubits, rng)
        if rng.random() >= recovery_probability(code, pattern).probability:
            failures += 1
    _, upper = wilson_interval(failures, samples, confidence)
    return failures / samples, upper


def run_expurgation(code: SubsystemCode, model: ErasureModel, mode, stop: StopCriteria,
                    rng: np.random.Generator, order=MeasurementOrder.WEIGHT) -> Tuple[SubsystemCode, ExpurgationTrace]:
    """
    Repeat expurgation rounds on fresh erasures until a stop criterion fires.

    Failure estimates use erasures independent of the ones that shaped the
    code. If k reaches 0 the trace is flagged as failed. A code with nothing
    left to expurgate stops after ``stop.max_idle_rounds`` empty rounds.
    """
    trace = ExpurgationTrace()
    n = code.n_qubits
    rnd = 0
    idle = 0
    while True:
        if stop.max_rounds is not None and rnd >= stop.max_rounds:
            trace.stop_reason = "max_rounds"
            break
        seed = spawn_seed(rng)
        pattern = sample_erasure(model, n, make_rng(seed))
        code, removed = expurgation_round(code, pattern, mode, rng, order)
        failure = upper = None
        if stop.max_failure is not None and code.n_logical > 0:
            failure, upper = estimate_failure(code, model, stop.samples, rng, stop.confidence)
        trace.records.append(TraceRecord(
            rnd, seed, pattern.n_erased, removed, code.n_logical, code_space_entropy(code), failure, upper,
        ))
        logger.info("round %d: removed %d, k=%d, failure=%s", rnd, removed, code.n_logical, failure)
        rnd += 1
        if code.n_logical == 0:
            trace.failed = True
            trace.stop_reason = "expurgation failed: no logicals left"
            break
        if stop.min_rate is not None and code.rate <= stop.min_rate:
            trace.stop_reason = "min_rate"
            break
        if stop.min_logicals is not None and code.n_logical <= stop.min_logicals:
            trace.stop_reason = "budget"
            break
        if upper is not None and upper <= stop.max_failure:
            trace.stop_reason = "max_failure"
            break
        idle = idle + 1 if removed == 0 else 0
        if stop.max_idle_rounds is not None and idle >= stop.max_idle_rounds:
            trace.stop_reason = "idle"
            break
    return code, trace
