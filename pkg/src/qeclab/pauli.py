"""
Pauli operators in the symplectic representation.

A Hermitian Pauli on N qubits is stored as bits (x, z) and a sign, meaning
``sign * prod_i i^(x_i z_i) X_i^x_i Z_i^z_i``; with this convention Y = iXZ.
"""

from typing import Iterable, List, Sequence, Tuple

import numpy as np

from qeclab.exceptions import InvalidArgumentError
from qeclab.gf2 import BitVector, row_parity

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _LETTERS.items()}


def product_phase(x1, z1, x2, z2) -> np.ndarray:
    """
    Exponent ``e`` (mod 4) with H(x1,z1) H(x2,z2) = i^e H(x1^x2, z1^z2).

    Works on arrays; the site axis is the last one and is summed over.
    """
    x1 = np.asarray(x1, dtype=np.int64)
    z1 = np.asarray(z1, dtype=np.int64)
    x2 = np.asarray(x2, dtype=np.int64)
    z2 = np.asarray(z2, dtype=np.int64)
    x3 = x1 ^ x2
    z3 = z1 ^ z2
    e = x1 * z1 + x2 * z2 + 2 * z1 * x2 - x3 * z3
    return np.sum(e, axis=-1) % 4


class PauliOperator:
    """A signed Hermitian Pauli operator on N qubits."""

    __slots__ = ("x", "z", "sign")

    def __init__(self, x: BitVector, z: BitVector, sign: int = 1):
        """
        Initialize a PauliOperator.

        Args:
            x: X-part bit vector of length N
            z: Z-part bit vector of length N
            sign: +1 or -1
        """
        if x.length != z.length:
            raise InvalidArgumentError(f"x/z length mismatch: {x.length} vs {z.length}")
        if sign not in (1, -1):
            raise InvalidArgumentError(f"sign must be +1 or -1, got {sign}")
        self.x = x
        self.z = z
        self.sign = int(sign)

    @staticmethod
    def from_bits(x, z, sign: int = 1) -> "PauliOperator":
        return PauliOperator(BitVector.from_bits(x), BitVector.from_bits(z), sign)

    @staticmethod
    def from_string(label: str) -> "PauliOperator":
        """Parse labels such as ``"+XIZY"``, ``"-ZZ"`` or ``"XX"`` (site 0 first)."""
        sign = 1
        if label and label[0] in "+-":
            sign = -1 if label[0] == "-" else 1
            label = label[1:]
        try:
            pairs = [_BITS[c] for c in label.upper()]
        except KeyError as err:
            raise InvalidArgumentError(f"bad Pauli letter {err} in '{label}'") from None
        x = [p[0] for p in pairs]
        z = [p[1] for p in pairs]
        return PauliOperator.from_bits(x, z, sign)

    @staticmethod
    def identity(n: int) -> "PauliOperator":
        return PauliOperator(BitVector.zeros(n), BitVector.zeros(n))

    @staticmethod
    def single(n: int, site: int, letter: str) -> "PauliOperator":
        """Single-site Pauli ``letter`` in {X, Y, Z} on ``site``."""
        if not 0 <= site < n:
            raise InvalidArgumentError(f"site {site} out of range for {n} qubits")
        xb, zb = _BITS[letter.upper()]
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        x[site], z[site] = xb, zb
        return PauliOperator.from_bits(x, z)

    @property
    def n_qubits(self) -> int:
        return self.x.length

    def support(self) -> List[int]:
        return (self.x | self.z).support()

    def weight(self) -> int:
        return (self.x | self.z).weight()

    def commutes_with(self, other: "PauliOperator") -> bool:
        return symplectic_product(self, other) == 0

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        """Product of two commuting Paulis (the result is Hermitian)."""
        if self.n_qubits != other.n_qubits:
            raise InvalidArgumentError("length mismatch")
        e = int(product_phase(self.x.to_bits(), self.z.to_bits(), other.x.to_bits(), other.z.to_bits()))
        if e % 2:
            raise InvalidArgumentError("product of anticommuting Paulis is not Hermitian")
        sign = self.sign * other.sign * (-1 if e == 2 else 1)
        return PauliOperator(self.x ^ other.x, self.z ^ other.z, sign)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator(self.x, self.z, -self.sign)

    def unsigned(self) -> "PauliOperator":
        return PauliOperator(self.x, self.z, 1)

    def asTuple(self) -> Tuple[np.ndarray, np.ndarray, int]:
        """Return (x bits, z bits, sign)."""
        return (self.x.to_bits(), self.z.to_bits(), self.sign)

    def label(self) -> str:
        xs, zs = self.x.to_bits(), self.z.to_bits()
        return "".join(_LETTERS[(int(a), int(b))] for a, b in zip(xs, zs))

    def __eq__(self, other):
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self.sign == other.sign and self.x == other.x and self.z == other.z

    def __hash__(self):
        return hash((self.x, self.z, self.sign))

    def __str__(self):
        return ("+" if self.sign > 0 else "-") + self.label()

    def __repr__(self):
        return f"PauliOperator('{self}')"


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    """
    Scalar commutator of two Paulis: 0 if they commute, 1 if they anticommute.

    Raises:
        InvalidArgumentError: on length mismatch
    """
    if a.n_qubits != b.n_qubits:
        raise InvalidArgumentError(f"length mismatch: {a.n_qubits} vs {b.n_qubits}")
    words = (a.x.words & b.z.words) ^ (a.z.words & b.x.words)
    return int(row_parity(words[None, :])[0])


class PauliTable:
    """
    Stack of signed Paulis held as unpacked uint8 arrays.

    This is the working layout of tableau rows: two-site gate updates touch
    two columns of every row at once.
    """

    def __init__(self, x: np.ndarray, z: np.ndarray, sign: np.ndarray = None):
        x = np.array(x, dtype=np.uint8, ndmin=2)
        z = np.array(z, dtype=np.uint8, ndmin=2)
        if x.shape != z.shape:
            raise InvalidArgumentError(f"x/z shape mismatch: {x.shape} vs {z.shape}")
        self.x = x
        self.z = z
        self.sign = np.ones(x.shape[0], dtype=np.int8) if sign is None else np.array(sign, dtype=np.int8)

    @staticmethod
    def empty(n_qubits: int) -> "PauliTable":
        return PauliTable(np.zeros((0, n_qubits), np.uint8), np.zeros((0, n_qubits), np.uint8))

    @staticmethod
    def from_paulis(paulis: Sequence[PauliOperator], n_qubits: int = None) -> "PauliTable":
        paulis = list(paulis)
        if not paulis:
            if n_qubits is None:
                raise InvalidArgumentError("n_qubits is required for an empty table")
            return PauliTable.empty(n_qubits)
        x = np.stack([p.x.to_bits() for p in paulis])
        z = np.stack([p.z.to_bits() for p in paulis])
        return PauliTable(x, z, [p.sign for p in paulis])

    @staticmethod
    def concatenate(tables: Iterable["PauliTable"]) -> "PauliTable":
        tables = list(tables)
        return PauliTable(
            np.concatenate([t.x for t in tables]),
            np.concatenate([t.z for t in tables]),
            np.concatenate([t.sign for t in tables]),
        )

    @property
    def n_qubits(self) -> int:
        return self.x.shape[1]

    def __len__(self):
        return self.x.shape[0]

    def copy(self) -> "PauliTable":
        return PauliTable(self.x.copy(), self.z.copy(), self.sign.copy())

    def take(self, rows) -> "PauliTable":
        rows = np.asarray(rows, dtype=np.intp).reshape(-1)
        return PauliTable(self.x[rows], self.z[rows], self.sign[rows])

    def row(self, i: int) -> PauliOperator:
        return PauliOperator.from_bits(self.x[i], self.z[i], int(self.sign[i]))

    def paulis(self) -> List[PauliOperator]:
        return [self.row(i) for i in range(len(self))]

    def set_row(self, i: int, p: PauliOperator):
        self.x[i] = p.x.to_bits()
        self.z[i] = p.z.to_bits()
        self.sign[i] = p.sign

    def commutation_with(self, p: PauliOperator) -> np.ndarray:
        """Vector of symplectic products between every row and ``p``."""
        px, pz = p.x.to_bits().astype(np.int64), p.z.to_bits().astype(np.int64)
        return ((self.x.astype(np.int64) @ pz + self.z.astype(np.int64) @ px) % 2).astype(np.uint8)

    def commutation_matrix(self, other: "PauliTable") -> np.ndarray:
        """Matrix of symplectic products between rows of ``self`` and ``other``."""
        a = self.x.astype(np.int64) @ other.z.T.astype(np.int64)
        b = self.z.astype(np.int64) @ other.x.T.astype(np.int64)
        return ((a + b) % 2).astype(np.uint8)

    def multiply_rows(self, targets, source: int):
        """
        Replace each target row t by row_t * row_source, in place.

        Target and source rows must commute.
        """
        targets = np.asarray(targets, dtype=np.intp).reshape(-1)
        if targets.size == 0:
            return
        self.multiply_by(targets, self.row(source))

    def multiply_by(self, targets, p: PauliOperator):
        """Replace each target row t by row_t * p, in place (rows must commute with p)."""
        targets = np.asarray(targets, dtype=np.intp).reshape(-1)
        if targets.size == 0:
            return
        px, pz = p.x.to_bits(), p.z.to_bits()
        e = product_phase(self.x[targets], self.z[targets], px[None, :], pz[None, :])
        if np.any(e % 2):
            raise InvalidArgumentError("row multiplication by an anticommuting Pauli")
        flip = np.where(e == 2, -1, 1).astype(np.int8)
        self.sign[targets] = self.sign[targets] * flip * np.int8(p.sign)
        self.x[targets] ^= px
        self.z[targets] ^= pz

    def __str__(self):
        return "\n".join(str(p) for p in self.paulis())
