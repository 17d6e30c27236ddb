"""
Summary statistics, crossing interpolation and scaling fits.
"""

import math
from enum import Enum
from typing import NamedTuple, Sequence, Tuple

import numpy as np
from scipy.stats import binomtest

from qeclab.constants import DEFAULT_CONFIDENCE
from qeclab.exceptions import InvalidArgumentError, NoCrossingError, SingularFitError


class SummaryStats(NamedTuple):
    mean: float
    stderr: float
    count: int


def summarize(samples: Sequence[float]) -> SummaryStats:
    """
    Mean and standard error (sample standard deviation / sqrt(n)).

    Raises:
        InvalidArgumentError: for an empty sample
    """
    values = np.asarray(samples, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise InvalidArgumentError("cannot summarize an empty sample")
    if values.size == 1:
        return SummaryStats(float(values[0]), 0.0, 1)
    return SummaryStats(float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size)), int(values.size))


def wilson_interval(successes: int, trials: int, confidence: float = DEFAULT_CONFIDENCE) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1 or not 0 <= successes <= trials:
        raise InvalidArgumentError(f"need 0 <= successes <= trials and trials >= 1, got {successes}/{trials}")
    ci = binomtest(int(successes), int(trials)).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def interpolate_dstar(depths: Sequence[float], values: Sequence[float], target: float = 0.5) -> float:
    """
    Depth at which ``values`` first crosses ``target``, by linear interpolation.

    Raises:
        NoCrossingError: if the series never reaches the target
    """
    d = np.asarray(depths, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if d.size != v.size:
        raise InvalidArgumentError("depths and values differ in length")
    if np.any(np.diff(d) < 0):
        raise InvalidArgumentError("depths must be sorted ascending")
    for i in range(d.size):
        if v[i] == target:
            return float(d[i])
        if i + 1 < d.size and (v[i] - target) * (v[i + 1] - target) < 0:
            return float(d[i] + (target - v[i]) * (d[i + 1] - d[i]) / (v[i + 1] - v[i]))
    raise NoCrossingError(target, d.tolist(), v.tolist())


class ScalingModel(Enum):
    LOG = "log"
    SQRT = "sqrt"
    LINEAR = "linear"

    def transform(self, xs: np.ndarray) -> np.ndarray:
        if self is ScalingModel.LINEAR:
            return xs
        if np.any(xs <= 0):
            raise InvalidArgumentError(f"{self.value} model needs positive x values")
        return np.log2(xs) if self is ScalingModel.LOG else np.sqrt(xs)


class ScalingFit(NamedTuple):
    slope: float
    intercept: float
    residual: float  # sum of squared residuals
    r_squared: float


def fit_scaling(xs: Sequence[float], ys: Sequence[float], model="linear") -> ScalingFit:
    """
    Least-squares fit of y = a g(x) + b with g in {log2, sqrt, identity}.

    Raises:
        InvalidArgumentError: for fewer than 3 points
        SingularFitError: if g(x) takes a single value
    """
    model = ScalingModel(model)
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.size < 3 or x.size != y.size:
        raise InvalidArgumentError(f"need at least 3 matching points, got {x.size} and {y.size}")
    design = np.column_stack([model.transform(x), np.ones_like(x)])
    coeffs, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 2:
        raise SingularFitError(f"design matrix for the {model.value} model is rank {rank}")
    fitted = design @ coeffs
    residual = float(np.sum((y - fitted) ** 2))
    total = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - residual / total if total > 0 else 1.0
    return ScalingFit(float(coeffs[0]), float(coeffs[1]), residual, r2)
