"""
Miscellaneous utilities: timing, seed derivation and random generators.
"""
import hashlib
import logging
import struct
import time
from contextlib import contextmanager
from functools import wraps
from typing import Any, Callable, Optional, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

SeedLike = Union[None, int, np.random.Generator]


def timer(func: Callable = None, *, level: int = logging.INFO) -> Callable:
    """
    A decorator logging how long a function takes to execute.

    Args:
        func: The function to be timed (used when decorator is called without parentheses).
        level: Logging level of the timing message. Defaults to INFO.

    Returns:
        The wrapped function. The elapsed time of the most recent call is
        stored on the wrapper as ``last_time``.

    Examples:
        >>> @timer
        ... def sweep():
        ...     return "done"
        >>> sweep()  # logs "sweep took 0.0000 seconds"
        'done'
    """
    def decorator(f: Callable) -> Callable:
        @wraps(f)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            result = f(*args, **kwargs)
            elapsed_time = time.perf_counter() - start_time
            logger.log(level, "%s took %.4f seconds", f.__name__, elapsed_time)
            wrapper.last_time = elapsed_time
            return result
        wrapper.last_time = None
        return wrapper

    # Support both @timer and @timer() syntax
    if func is None:
        return decorator
    return decorator(func)


@contextmanager
def timer_context(name: str = "Code block", level: int = logging.INFO):
    """
    A context manager logging the time spent in a block of code.

    Args:
        name: A name to identify the timed code block.
        level: Logging level of the timing message.

    Examples:
        >>> with timer_context("rank sweep"):
        ...     total = sum(range(1000))
    """
    start_time = time.perf_counter()
    try:
        yield
    finally:
        elapsed_time = time.perf_counter() - start_time
        logger.log(level, "%s took %.4f seconds", name, elapsed_time)


def time_function(func: Callable, *args, **kwargs) -> Tuple[Any, float]:
    """
    Time a function call and return both the result and elapsed time.

    Args:
        func: The function to time.
        *args: Positional arguments to pass to the function.
        **kwargs: Keyword arguments to pass to the function.

    Returns:
        A tuple of (function_result, elapsed_time_in_seconds).
    """
    start_time = time.perf_counter()
    result = func(*args, **kwargs)
    elapsed_time = time.perf_counter() - start_time
    return result, elapsed_time


def child_seed(master_seed: int, *coordinates: Any) -> int:
    """
    Derive a 64-bit seed from a master seed and trial coordinates.

    The digest is a keyed BLAKE2b hash, so the result depends only on the
    values passed in and never on scheduling or thread count.

    Args:
        master_seed: Non-negative master seed of the experiment.
        *coordinates: Hashable values identifying the trial (experiment id,
            N, depth, point, trial index, ...). Their ``repr`` is hashed.

    Returns:
        An integer in [0, 2**64).
    """
    key = struct.pack("<Q", int(master_seed) & 0xFFFFFFFFFFFFFFFF)
    h = hashlib.blake2b(digest_size=8, key=key)
    for c in coordinates:
        h.update(repr(c).encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little")


def make_rng(seed: SeedLike = None) -> np.random.Generator:
    """
    Build a PCG64 generator from a seed, or pass an existing generator through.

    Args:
        seed: None for fresh entropy, an integer seed, or a Generator.

    Returns:
        A numpy Generator.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def spawn_seed(rng: np.random.Generator) -> int:
    """Draw a 63-bit integer seed from ``rng`` (used to seed nested work)."""
    return int(rng.integers(0, 2 ** 63 - 1))


def format_float(value: Optional[float], digits: int = 9) -> str:
    """Format a float with ``digits`` significant digits; None becomes an empty field."""
    if value is None:
        return ""
    return f"{value:.{digits}g}"
