"""
Tests for summary statistics, crossing interpolation and scaling fits.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Try importing directly first (if package is installed)
try:
    from qeclab.exceptions import InvalidArgumentError, NoCrossingError, SingularFitError
    from qeclab.stats import fit_scaling, interpolate_dstar, summarize, wilson_interval
except ImportError:
    # If not installed, add src to path
    test_dir = Path(__file__).parent
    src_dir = test_dir.parent / 'src'
    sys.path.insert(0, str(src_dir))
    from qeclab.exceptions import InvalidArgumentError, NoCrossingError, SingularFitError
    from qeclab.stats import fit_scaling, interpolate_dstar, summarize, wilson_interval

# Import the test runner
try:
    from tests.test_runner import run_tests
except ImportError:
    from test_runner import run_tests


def test_summarize():
    s = summarize([0, 1])
    assert s.mean == pytest.approx(0.5)
    assert s.stderr == pytest.approx(0.5)
    assert s.count == 2

    s = summarize([1, 1, 1, 1])
    assert s.mean == 1.0 and s.stderr == 0.0

    s = summarize([3.5])
    assert s == (3.5, 0.0, 1)


def test_summarize_empty():
    with pytest.raises(InvalidArgumentError):
        summarize([])


def test_wilson_interval():
    low, high = wilson_interval(5, 10)
    assert 0.0 < low < 0.5 < high < 1.0
    assert low == pytest.approx(1.0 - high)

    low, high = wilson_interval(0, 200)
    assert low == pytest.approx(0.0, abs=1e-12)
    assert 0.0 < high < 0.03

    narrow = wilson_interval(50, 1000)
    wide = wilson_interval(5, 100)
    assert narrow[1] - narrow[0] < wide[1] - wide[0]


def test_wilson_interval_rejects_bad_counts():
    with pytest.raises(InvalidArgumentError):
        wilson_interval(3, 2)
    with pytest.raises(InvalidArgumentError):
        wilson_interval(0, 0)


def test_interpolate_dstar():
    assert interpolate_dstar([4, 8], [0.8, 0.3]) == pytest.approx(6.4)
    assert interpolate_dstar([6], [0.5]) == 6.0
    # first crossing wins
    assert interpolate_dstar([0, 2, 4, 6], [1.0, 0.4, 0.6, 0.2]) == pytest.approx(1 + 2 / 3)
    # rising series
    assert interpolate_dstar([0, 10], [0.0, 1.0], target=0.25) == pytest.approx(2.5)


def test_interpolate_dstar_no_crossing():
    with pytest.raises(NoCrossingError) as info:
        interpolate_dstar([1, 2, 3], [0.9, 0.8, 0.7])
    assert info.value.target == 0.5
    assert info.value.depth_range == (1.0, 3.0)


def test_interpolate_dstar_validation():
    with pytest.raises(InvalidArgumentError):
        interpolate_dstar([4, 2], [0.8, 0.3])
    with pytest.raises(InvalidArgumentError):
        interpolate_dstar([1, 2, 3], [0.8, 0.3])


def test_fit_log():
    xs = np.array([2.0, 4.0, 8.0, 16.0, 32.0])
    fit = fit_scaling(xs, 3.0 * np.log2(xs) + 1.0, "log")
    assert fit.slope == pytest.approx(3.0)
    assert fit.intercept == pytest.approx(1.0)
    assert fit.residual < 1e-10
    assert fit.r_squared == pytest.approx(1.0)


def test_fit_model_selection_by_residual():
    xs = np.array([4.0, 16.0, 64.0, 256.0, 1024.0])
    ys = 2.0 * np.sqrt(xs)
    assert fit_scaling(xs, ys, "sqrt").residual < fit_scaling(xs, ys, "log").residual
    assert fit_scaling(xs, ys, "sqrt").slope == pytest.approx(2.0)


def test_fit_linear():
    fit = fit_scaling([1, 2, 3, 4], [1.5, 2.0, 2.5, 3.0])
    assert fit.slope == pytest.approx(0.5)
    assert fit.intercept == pytest.approx(1.0)


def test_fit_errors():
    with pytest.raises(InvalidArgumentError):
        fit_scaling([1, 2], [1, 2])
    with pytest.raises(SingularFitError):
        fit_scaling([4, 4, 4], [1, 2, 3], "log")
    with pytest.raises(InvalidArgumentError):
        fit_scaling([0, 1, 2], [1, 2, 3], "log")
    with pytest.raises(ValueError):
        fit_scaling([1, 2, 3], [1, 2, 3], "cubic")


def test_fit_residual_is_sum_of_squares():
    fit = fit_scaling([1, 2, 3], [0, 1, 0])
    # best line is flat at 1/3
    assert fit.slope == pytest.approx(0.0, abs=1e-12)
    assert fit.residual == pytest.approx(2 / 3)
    assert math.isclose(fit.r_squared, 0.0, abs_tol=1e-12)


if __name__ == "__main__":
    run_tests("Testing statistics")
