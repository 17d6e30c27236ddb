"""
Geometries, gate ensembles and layer schedules for random encoding circuits.

One layer places every site in exactly one two-qubit gate, so depth d means
d two-qubit gates per site for every geometry. Boundaries are periodic.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np

from qeclab.clifford import (
    CliffordGate,
    clifford_tables,
    iswap_dressed_tables,
    sample_iswap_dressed,
    sample_two_qubit_clifford,
)
from qeclab.exceptions import InvalidArgumentError
from qeclab.stabilizer import SubsystemCode

logger = logging.getLogger(__name__)


class GeometryKind(Enum):
    CHAIN1D = "chain1d"
    GRID2D = "grid2d"
    ALL2ALL = "all2all"
    BLOCKS = "blocks"


# (dx, dy) for layer mod 4: north, east, south, west
_GRID_DIRECTIONS = ((0, 1), (1, 0), (0, -1), (-1, 0))


@dataclass(frozen=True)
class Geometry:
    """Connectivity of the encoding circuit."""

    kind: GeometryKind
    n_qubits: int
    lx: int = 0
    ly: int = 0
    block_size: int = 0

    def __post_init__(self):
        n = self.n_qubits
        if n < 2 or n % 2:
            raise InvalidArgumentError(f"geometry needs an even number of sites >= 2, got {n}")
        if self.kind is GeometryKind.GRID2D:
            if self.lx * self.ly != n or self.lx % 2 or self.ly % 2:
                raise InvalidArgumentError(f"grid {self.lx}x{self.ly} needs even sides with product {n}")
        if self.kind is GeometryKind.BLOCKS:
            b = self.block_size
            if b < 2 or b % 2 or n % b:
                raise InvalidArgumentError(f"block size {b} must be even and divide {n}")

    @staticmethod
    def chain(n_qubits: int) -> "Geometry":
        return Geometry(GeometryKind.CHAIN1D, n_qubits)

    @staticmethod
    def grid(lx: int, ly: int) -> "Geometry":
        return Geometry(GeometryKind.GRID2D, lx * ly, lx=lx, ly=ly)

    @staticmethod
    def all_to_all(n_qubits: int) -> "Geometry":
        return Geometry(GeometryKind.ALL2ALL, n_qubits)

    @staticmethod
    def blocks(n_qubits: int, block_size: int) -> "Geometry":
        return Geometry(GeometryKind.BLOCKS, n_qubits, block_size=block_size)

    @staticmethod
    def build(kind: Union[str, GeometryKind], n_qubits: int, block_size: int = 0) -> "Geometry":
        """Geometry from a config name; grids use the most nearly square even factorization."""
        kind = GeometryKind(kind)
        if kind is GeometryKind.GRID2D:
            lx = _square_even_side(n_qubits)
            return Geometry.grid(lx, n_qubits // lx)
        if kind is GeometryKind.BLOCKS:
            return Geometry.blocks(n_qubits, block_size)
        return Geometry(kind, n_qubits)

    def site(self, x: int, y: int) -> int:
        return (y % self.ly) * self.lx + (x % self.lx)

    def coordinates(self, site: int) -> Tuple[int, int]:
        return site % self.lx, site // self.lx

    def block_of(self, site: int) -> int:
        return site // self.block_size


def _square_even_side(n: int) -> int:
    for lx in range(int(math.isqrt(n)), 1, -1):
        if n % lx == 0 and lx % 2 == 0 and (n // lx) % 2 == 0:
            return lx
    raise InvalidArgumentError(f"{n} sites cannot form a grid with even sides")


def _brickwork(n: int, layer: int, offset: int = 0) -> np.ndarray:
    first = np.arange(0, n, 2) + (layer % 2)
    return np.stack([offset + first % n, offset + (first + 1) % n], axis=1)


def layer_schedule(geometry: Geometry, layer: int, rng: np.random.Generator = None) -> np.ndarray:
    """
    Disjoint site pairs of one circuit layer.

    Args:
        geometry: circuit connectivity
        layer: layer index, >= 0
        rng: needed for all-to-all matchings

    Returns:
        (N/2, 2) array of site pairs covering every site once
    """
    if layer < 0:
        raise InvalidArgumentError(f"layer index must be >= 0, got {layer}")
    n = geometry.n_qubits
    kind = geometry.kind
    if kind is GeometryKind.CHAIN1D:
        return _brickwork(n, layer)
    if kind is GeometryKind.BLOCKS:
        b = geometry.block_size
        return np.concatenate([_brickwork(b, layer, offset) for offset in range(0, n, b)])
    if kind is GeometryKind.GRID2D:
        dx, dy = _GRID_DIRECTIONS[layer % 4]
        pairs = []
        for y in range(geometry.ly):
            for x in range(geometry.lx):
                if (x + y) % 2 == 0:
                    pairs.append((geometry.site(x, y), geometry.site(x + dx, y + dy)))
        return np.array(pairs, dtype=np.intp)
    if rng is None:
        raise InvalidArgumentError("all-to-all schedules need an rng")
    return rng.permutation(n).reshape(-1, 2)


class GateEnsemble(Enum):
    """Distribution the two-qubit gates are drawn from."""

    CLIFFORD_2Q = "clifford2q"
    ISWAP_SINGLES = "iswap_singles"

    def _tables(self):
        return clifford_tables() if self is GateEnsemble.CLIFFORD_2Q else iswap_dressed_tables()

    def sample(self, rng: np.random.Generator) -> CliffordGate:
        if self is GateEnsemble.CLIFFORD_2Q:
            return sample_two_qubit_clifford(rng)
        return sample_iswap_dressed(rng)

    def sample_tables(self, rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]:
        """Lookup tables of ``size`` independent gates, each (size, 16)."""
        out, flip = self._tables()
        choice = rng.integers(out.shape[0], size=size)
        return out[choice], flip[choice]


@dataclass(frozen=True)
class DepthSchedule:
    """Number of circuit layers d (two-qubit gates per site)."""

    depth: int

    def __post_init__(self):
        if self.depth < 0:
            raise InvalidArgumentError(f"depth must be >= 0, got {self.depth}")

    def layers(self) -> range:
        return range(self.depth)


def apply_random_circuit(code: SubsystemCode, geometry: Geometry, ensemble: GateEnsemble,
                         schedule: Union[DepthSchedule, int], rng: np.random.Generator) -> SubsystemCode:
    """
    Apply ``schedule.depth`` random layers to ``code`` in place.

    Every gate is a fresh draw from ``ensemble``; the result is a function
    of the rng state alone.
    """
    if geometry.n_qubits != code.n_qubits:
        raise InvalidArgumentError(f"geometry has {geometry.n_qubits} sites, code has {code.n_qubits}")
    if not isinstance(schedule, DepthSchedule):
        schedule = DepthSchedule(int(schedule))
    ensemble = GateEnsemble(ensemble)
    for layer in schedule.layers():
        pairs = layer_schedule(geometry, layer, rng)
        out, flip = ensemble.sample_tables(rng, len(pairs))
        code.apply_layer(pairs, out, flip)
    logger.debug("applied %d %s layers on %s", schedule.depth, ensemble.value, geometry.kind.value)
    return code
