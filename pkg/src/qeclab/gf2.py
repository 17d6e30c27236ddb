"""
Bit-packed linear algebra over GF(2).

Rows are packed little-endian into 64-bit words: column ``j`` lives in word
``j // 64`` at bit ``j % 64``. Padding bits beyond the last column are always
zero, so word-level equality and XOR are exact.
"""

from typing import Iterable, List, NamedTuple, Optional, Sequence

import numpy as np

from qeclab.exceptions import InvalidArgumentError, NoSolutionError

WORD_BITS = 64
_WORD = np.dtype("<u8")


def n_words(length: int) -> int:
    """Number of 64-bit words needed for ``length`` bits."""
    return (length + WORD_BITS - 1) // WORD_BITS


def pack_bits(bits) -> np.ndarray:
    """
    Pack a 0/1 array along its last axis into little-endian uint64 words.

    Args:
        bits: array-like of shape (..., n) with entries in {0, 1}

    Returns:
        uint64 array of shape (..., ceil(n / 64))
    """
    bits = np.asarray(bits, dtype=np.uint8) & 1
    n = bits.shape[-1]
    w = n_words(n)
    padded = np.zeros(bits.shape[:-1] + (w * WORD_BITS,), dtype=np.uint8)
    padded[..., :n] = bits
    packed = np.packbits(padded, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view(_WORD).reshape(bits.shape[:-1] + (w,))


def unpack_bits(words: np.ndarray, length: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`; returns a uint8 array of shape (..., length)."""
    words = np.ascontiguousarray(words, dtype=_WORD)
    as_bytes = words.view(np.uint8).reshape(words.shape[:-1] + (words.shape[-1] * 8,))
    return np.unpackbits(as_bytes, axis=-1, bitorder="little", count=length)


def row_parity(words: np.ndarray) -> np.ndarray:
    """Parity of the popcount of each row of a (..., W) word array."""
    v = np.bitwise_xor.reduce(words, axis=-1) if words.shape[-1] else np.zeros(words.shape[:-1], _WORD)
    v = np.array(v, dtype=_WORD)
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> np.uint64(shift)
    return (v & np.uint64(1)).astype(np.uint8)


class BitVector:
    """Immutable packed vector over GF(2)."""

    __slots__ = ("words", "length")

    def __init__(self, words: np.ndarray, length: int):
        """
        Initialize a BitVector from already packed words.

        Args:
            words: uint64 array of ceil(length / 64) words, padding bits zero
            length: number of logical bits
        """
        words = np.array(words, dtype=_WORD).reshape(-1)
        if words.size != n_words(length):
            raise InvalidArgumentError(f"{words.size} words cannot hold exactly {length} bits")
        words.setflags(write=False)
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "length", int(length))

    def __setattr__(self, name, value):
        raise AttributeError("BitVector is immutable")

    @staticmethod
    def from_bits(bits) -> "BitVector":
        bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
        return BitVector(pack_bits(bits), bits.size)

    @staticmethod
    def from_string(s: str) -> "BitVector":
        """Build from a string of '0'/'1' characters, leftmost character is bit 0."""
        return BitVector.from_bits([1 if c == "1" else 0 for c in s])

    @staticmethod
    def zeros(length: int) -> "BitVector":
        return BitVector(np.zeros(n_words(length), dtype=_WORD), length)

    @staticmethod
    def unit(length: int, index: int) -> "BitVector":
        bits = np.zeros(length, dtype=np.uint8)
        bits[index] = 1
        return BitVector.from_bits(bits)

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self.words, self.length)

    def __len__(self):
        return self.length

    def __getitem__(self, i: int) -> int:
        if not -self.length <= i < self.length:
            raise IndexError(i)
        i %= self.length
        return int((int(self.words[i // WORD_BITS]) >> (i % WORD_BITS)) & 1)

    def _check(self, other: "BitVector"):
        if self.length != other.length:
            raise InvalidArgumentError(f"length mismatch: {self.length} vs {other.length}")

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.words ^ other.words, self.length)

    def __and__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.words & other.words, self.length)

    def __or__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.words | other.words, self.length)

    def dot(self, other: "BitVector") -> int:
        """Inner product over GF(2)."""
        self._check(other)
        return int(row_parity((self.words & other.words)[None, :])[0])

    def weight(self) -> int:
        return int(self.to_bits().sum())

    def support(self) -> List[int]:
        return [int(i) for i in np.flatnonzero(self.to_bits())]

    def any(self) -> bool:
        return bool(self.words.any())

    def __eq__(self, other):
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.length, self.words.tobytes()))

    def __str__(self):
        return "".join(str(b) for b in self.to_bits())

    def __repr__(self):
        return f"BitVector('{self}')"


class BitMatrix:
    """Packed binary matrix; each row is a run of 64-bit words."""

    def __init__(self, data: np.ndarray, n_cols: int):
        """
        Initialize a BitMatrix from packed rows.

        Args:
            data: uint64 array of shape (n_rows, ceil(n_cols / 64))
            n_cols: number of columns
        """
        data = np.array(data, dtype=_WORD, ndmin=2)
        if data.shape[1] != n_words(n_cols):
            data = data.reshape(-1, n_words(n_cols))
        self.data = data
        self.n_cols = int(n_cols)

    @property
    def n_rows(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @staticmethod
    def from_bits(bits) -> "BitMatrix":
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 2:
            raise InvalidArgumentError("from_bits expects a 2-d array")
        return BitMatrix(pack_bits(bits), bits.shape[1])

    @staticmethod
    def from_rows(rows: Sequence[BitVector], n_cols: Optional[int] = None) -> "BitMatrix":
        if not rows:
            if n_cols is None:
                raise InvalidArgumentError("n_cols is required for an empty row list")
            return BitMatrix.zeros(0, n_cols)
        n_cols = rows[0].length if n_cols is None else n_cols
        if any(r.length != n_cols for r in rows):
            raise InvalidArgumentError("all rows must share n_cols")
        return BitMatrix(np.stack([r.words for r in rows]), n_cols)

    @staticmethod
    def zeros(n_rows: int, n_cols: int) -> "BitMatrix":
        return BitMatrix(np.zeros((n_rows, n_words(n_cols)), dtype=_WORD), n_cols)

    @staticmethod
    def identity(n: int) -> "BitMatrix":
        return BitMatrix.from_bits(np.eye(n, dtype=np.uint8))

    @staticmethod
    def hstack(blocks: Iterable["BitMatrix"]) -> "BitMatrix":
        blocks = list(blocks)
        return BitMatrix.from_bits(np.hstack([b.to_bits() for b in blocks]))

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self.data, self.n_cols).reshape(self.n_rows, self.n_cols)

    def row(self, i: int) -> BitVector:
        return BitVector(self.data[i], self.n_cols)

    @property
    def rows(self) -> List[BitVector]:
        return [self.row(i) for i in range(self.n_rows)]

    def column(self, j: int) -> np.ndarray:
        w, b = divmod(j, WORD_BITS)
        return ((self.data[:, w] >> np.uint64(b)) & np.uint64(1)).astype(np.uint8)

    def take_columns(self, cols: Sequence[int]) -> "BitMatrix":
        return BitMatrix.from_bits(self.to_bits()[:, list(cols)].reshape(self.n_rows, len(cols)))

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.data.copy(), self.n_cols)

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.data, other.data)

    def __str__(self):
        return "\n".join(str(r) for r in self.rows)

    def __repr__(self):
        return f"BitMatrix({self.n_rows}x{self.n_cols})"


class RowReduction(NamedTuple):
    reduced: BitMatrix
    pivots: List[int]
    rank: int


def _rref_inplace(data: np.ndarray, pivot_cols: int) -> List[int]:
    """
    Reduce packed rows in place to reduced row-echelon form.

    Only columns ``< pivot_cols`` are eligible as pivots; columns beyond are
    carried along (used for augmented systems). Pivot rule: lowest-index
    nonzero column, first qualifying row at or below the current row.
    """
    n_rows = data.shape[0]
    pivots = []
    r = 0
    one = np.uint64(1)
    for c in range(pivot_cols):
        if r == n_rows:
            break
        w, b = divmod(c, WORD_BITS)
        shift = np.uint64(b)
        col = (data[r:, w] >> shift) & one
        hits = np.flatnonzero(col)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
        mask = ((data[:, w] >> shift) & one).astype(bool)
        mask[r] = False
        if mask.any():
            data[mask] ^= data[r]
        pivots.append(c)
        r += 1
    return pivots


def row_reduce(m: BitMatrix) -> RowReduction:
    """
    Reduced row-echelon form over GF(2) with a deterministic pivot rule.

    Args:
        m: matrix to reduce (not modified)

    Returns:
        RowReduction(reduced, pivots, rank)
    """
    data = m.data.copy()
    pivots = _rref_inplace(data, m.n_cols)
    return RowReduction(BitMatrix(data, m.n_cols), pivots, len(pivots))


def rank(m: BitMatrix) -> int:
    return row_reduce(m).rank


def rank_pair(m: BitMatrix, split: int):
    """
    Rank of ``m`` and of its leading ``split`` columns.

    Elimination runs left to right, so the pivots that land in columns
    ``< split`` are exactly the pivots of the left sub-matrix.

    Returns:
        (rank_full, rank_left)
    """
    if not 0 <= split <= m.n_cols:
        raise InvalidArgumentError(f"split {split} outside [0, {m.n_cols}]")
    pivots = row_reduce(m).pivots
    return len(pivots), sum(1 for p in pivots if p < split)


def reduce_with_tracking(m: BitMatrix, pivot_cols: Optional[int] = None):
    """
    Row-reduce ``[m | I]`` so that each reduced row records which original
    rows were combined to make it.

    Args:
        m: matrix to reduce
        pivot_cols: only the first ``pivot_cols`` columns of ``m`` may hold
            pivots (defaults to all columns of ``m``)

    Returns:
        (reduced_part, combination_part, pivots) where reduced_part has the
        shape of ``m`` and combination_part is n_rows x n_rows.
    """
    pivot_cols = m.n_cols if pivot_cols is None else pivot_cols
    bits = np.hstack([m.to_bits(), np.eye(m.n_rows, dtype=np.uint8)])
    data = pack_bits(bits)
    pivots = _rref_inplace(data, pivot_cols)
    full = unpack_bits(data, m.n_cols + m.n_rows).reshape(m.n_rows, m.n_cols + m.n_rows)
    return (
        BitMatrix.from_bits(full[:, :m.n_cols]),
        BitMatrix.from_bits(full[:, m.n_cols:]),
        pivots,
    )


def solve_left(m: BitMatrix, target: BitVector) -> BitVector:
    """
    Find coefficients ``a`` with ``a · m = target`` (a combination of rows).

    Raises:
        NoSolutionError: if ``target`` is not in the row space of ``m``
    """
    if target.length != m.n_cols:
        raise InvalidArgumentError(f"target length {target.length} != n_cols {m.n_cols}")
    reduced, combos, pivots = reduce_with_tracking(m)
    residual = target.to_bits().copy()
    red_bits = reduced.to_bits()
    comb_bits = combos.to_bits()
    coeffs = np.zeros(m.n_rows, dtype=np.uint8)
    for i, p in enumerate(pivots):
        if residual[p]:
            residual ^= red_bits[i]
            coeffs ^= comb_bits[i]
    if residual.any():
        raise NoSolutionError("target is not in the row space")
    return BitVector.from_bits(coeffs)


def naive_rank(bits) -> int:
    """Per-bit Gaussian elimination on an unpacked 0/1 array (reference oracle)."""
    a = (np.array(bits, dtype=np.uint8) & 1).copy()
    if a.size == 0:
        return 0
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        hit = None
        for i in range(r, rows):
            if a[i, c]:
                hit = i
                break
        if hit is None:
            continue
        a[[r, hit]] = a[[hit, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
        if r == rows:
            break
    return r
