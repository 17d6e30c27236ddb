"""
Exception hierarchy for qeclab.
"""


class QecLabError(Exception):
    """Base class for all errors raised by qeclab."""


class InvalidArgumentError(QecLabError, ValueError):
    """An argument is outside the domain of the operation."""


class DomainError(QecLabError, ValueError):
    """A closed-form expression is evaluated outside its range of validity."""


class ResourceLimitError(QecLabError):
    """A brute-force or dense computation would exceed its size guard."""


class NoSolutionError(QecLabError):
    """A linear system over GF(2) is inconsistent."""


class SingularFitError(QecLabError):
    """A least-squares design matrix is rank deficient."""


class NoCrossingError(QecLabError):
    """A series never crosses the requested target value."""

    def __init__(self, target, depths, values):
        self.target = target
        self.depth_range = (min(depths), max(depths)) if len(depths) else (None, None)
        self.value_range = (min(values), max(values)) if len(values) else (None, None)
        super().__init__(
            f"series never crosses {target}: depths {self.depth_range}, "
            f"values {self.value_range}"
        )


class ConfigError(QecLabError):
    """An experiment configuration is invalid; `key` names the offending entry."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"config key '{key}': {message}")


class InvariantError(QecLabError):
    """A tableau no longer satisfies its commutation structure."""
