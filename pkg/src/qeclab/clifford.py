"""
Two-qubit Clifford gates in the Heisenberg picture.

A gate is stored by the images of X1, Z1, X2, Z2 under conjugation: a 4x4
binary matrix whose rows are the image bit patterns (x1, z1, x2, z2) and a
sign per image. Any sign pattern on a symplectic matrix is a valid Clifford,
so the group modulo phase is Sp(4, 2) x {+-1}^4 with 720 * 16 = 11520
elements.

For fast circuit simulation each gate is compiled to a lookup table over
the 16 local Pauli patterns (index 8*x1 + 4*z1 + 2*x2 + z2): the output
pattern and whether the sign flips.

Dense matrices use qubit 0 as the most significant tensor factor. The iSWAP
gate is diag-block [[1,0,0,0],[0,0,i,0],[0,i,0,0],[0,0,0,1]], which sends
X1 -> Z1 Y2 and Z1 -> Z2.
"""

from collections import deque
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from qeclab.constants import CLIFFORD_1Q_ORDER, CLIFFORD_2Q_ORDER, SYMPLECTIC_4_ORDER
from qeclab.exceptions import InvalidArgumentError
from qeclab.pauli import PauliOperator, product_phase

# Symplectic form in the interleaved (x1, z1, x2, z2) layout
_OMEGA4 = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.int64)
_LOCAL_PATTERNS = np.array([[(i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1] for i in range(16)], dtype=np.uint8)

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
ISWAP_MATRIX = np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex)


def _pattern_index(bits) -> int:
    b = [int(v) for v in bits]
    return 8 * b[0] + 4 * b[1] + 2 * b[2] + b[3]


def _local_phase(v: np.ndarray, w: np.ndarray) -> int:
    """i-exponent of H(v) H(w) for 4-bit local patterns."""
    return int(product_phase(v[[0, 2]], v[[1, 3]], w[[0, 2]], w[[1, 3]]))


class CliffordGate:
    """A two-qubit Clifford modulo global phase."""

    __slots__ = ("symplectic", "signs", "_table", "_flip")

    def __init__(self, symplectic, signs=(1, 1, 1, 1)):
        """
        Initialize a CliffordGate.

        Args:
            symplectic: 4x4 array; row j is the image pattern of X1, Z1, X2, Z2
            signs: signs of the four images
        """
        self.symplectic = np.array(symplectic, dtype=np.uint8).reshape(4, 4) & 1
        self.signs = np.array(signs, dtype=np.int8).reshape(4)
        self._table = None
        self._flip = None

    # -- construction ---------------------------------------------------

    @staticmethod
    def identity() -> "CliffordGate":
        return CliffordGate(np.eye(4, dtype=np.uint8))

    @staticmethod
    def from_images(images: Sequence[PauliOperator]) -> "CliffordGate":
        """Build from the conjugation images of X1, Z1, X2, Z2 (2-qubit Paulis)."""
        if len(images) != 4 or any(p.n_qubits != 2 for p in images):
            raise InvalidArgumentError("need four 2-qubit images")
        rows = [[p.x[0], p.z[0], p.x[1], p.z[1]] for p in images]
        return CliffordGate(rows, [p.sign for p in images])

    @staticmethod
    def from_index(index: int) -> "CliffordGate":
        """Gate number ``index`` in [0, 11520): symplectic index * 16 + sign word."""
        if not 0 <= index < CLIFFORD_2Q_ORDER:
            raise InvalidArgumentError(f"Clifford index {index} out of range")
        s, word = divmod(int(index), 16)
        return CliffordGate(symplectic_matrix(s, 2), sign_word_to_signs(word))

    @staticmethod
    def from_unitary(u: np.ndarray) -> "CliffordGate":
        """Read off conjugation images from a dense 4x4 Clifford unitary."""
        u = np.asarray(u, dtype=complex)
        rows, signs = [], []
        for bits in ([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]):
            image = u @ local_pauli_matrix(bits) @ u.conj().T
            for idx in range(16):
                overlap = np.trace(local_pauli_matrix(_LOCAL_PATTERNS[idx]).conj().T @ image) / 4
                if abs(abs(overlap) - 1) < 1e-9:
                    if abs(overlap.imag) > 1e-9:
                        raise InvalidArgumentError("image is not Hermitian")
                    rows.append(_LOCAL_PATTERNS[idx])
                    signs.append(1 if overlap.real > 0 else -1)
                    break
            else:
                raise InvalidArgumentError("unitary is not a Clifford")
        return CliffordGate(rows, signs)

    @staticmethod
    def hadamard(site: int) -> "CliffordGate":
        m = np.eye(4, dtype=np.uint8)
        m[2 * site:2 * site + 2, 2 * site:2 * site + 2] = [[0, 1], [1, 0]]
        return CliffordGate(m)

    @staticmethod
    def phase(site: int) -> "CliffordGate":
        m = np.eye(4, dtype=np.uint8)
        m[2 * site] = 0
        m[2 * site, 2 * site:2 * site + 2] = [1, 1]
        return CliffordGate(m)

    @staticmethod
    def cnot() -> "CliffordGate":
        return CliffordGate([[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 0, 1]])

    @staticmethod
    def swap() -> "CliffordGate":
        return CliffordGate([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])

    @staticmethod
    def iswap() -> "CliffordGate":
        return CliffordGate.from_unitary(ISWAP_MATRIX)

    # -- action ---------------------------------------------------------

    def _compile(self):
        out = np.zeros(16, dtype=np.uint8)
        flip = np.zeros(16, dtype=bool)
        for idx in range(16):
            bits = _LOCAL_PATTERNS[idx]
            cur = np.zeros(4, dtype=np.uint8)
            e = int(bits[0] * bits[1] + bits[2] * bits[3])
            for j in range(4):
                if bits[j]:
                    e += _local_phase(cur, self.symplectic[j])
                    if self.signs[j] < 0:
                        e += 2
                    cur ^= self.symplectic[j]
            e %= 4
            if e % 2:
                raise InvalidArgumentError("images do not form a Clifford")
            out[idx] = _pattern_index(cur)
            flip[idx] = e == 2
        self._table, self._flip = out, flip

    @property
    def table(self) -> np.ndarray:
        """Output pattern index for each of the 16 local input patterns."""
        if self._table is None:
            self._compile()
        return self._table

    @property
    def flip(self) -> np.ndarray:
        """Sign flip for each of the 16 local input patterns."""
        if self._flip is None:
            self._compile()
        return self._flip

    def conjugate(self, p: PauliOperator) -> PauliOperator:
        """Image ``U p U^dagger`` of a 2-qubit Pauli."""
        if p.n_qubits != 2:
            raise InvalidArgumentError("gate acts on 2-qubit Paulis")
        idx = _pattern_index([p.x[0], p.z[0], p.x[1], p.z[1]])
        o = _LOCAL_PATTERNS[self.table[idx]]
        sign = p.sign * (-1 if self.flip[idx] else 1)
        return PauliOperator.from_bits([o[0], o[2]], [o[1], o[3]], sign)

    def then(self, other: "CliffordGate") -> "CliffordGate":
        """The gate that applies ``self`` first and ``other`` second."""
        rows, signs = [], []
        for j in range(4):
            idx = _pattern_index(self.symplectic[j])
            rows.append(_LOCAL_PATTERNS[other.table[idx]])
            signs.append(int(self.signs[j]) * (-1 if other.flip[idx] else 1))
        return CliffordGate(rows, signs)

    def images(self) -> List[PauliOperator]:
        return [
            PauliOperator.from_bits([r[0], r[2]], [r[1], r[3]], int(s))
            for r, s in zip(self.symplectic, self.signs)
        ]

    def is_symplectic(self) -> bool:
        s = self.symplectic.astype(np.int64)
        return np.array_equal((s @ _OMEGA4 @ s.T) % 2, _OMEGA4)

    def key(self) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.symplectic.reshape(-1)) + tuple(int(v) for v in self.signs)

    def __eq__(self, other):
        if not isinstance(other, CliffordGate):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        names = ("X1", "Z1", "X2", "Z2")
        return ", ".join(f"{n}->{p}" for n, p in zip(names, self.images()))

    def __repr__(self):
        return f"CliffordGate({self})"


def sign_word_to_signs(word: int) -> List[int]:
    """
    Signs produced by conjugating with the Pauli whose pattern is ``word``.

    The Pauli Q = (qx1, qz1, qx2, qz2) flips the image of X_i iff qz_i = 1 and
    of Z_i iff qx_i = 1.
    """
    q = _LOCAL_PATTERNS[word]
    return [(-1) ** int(q[1]), (-1) ** int(q[0]), (-1) ** int(q[3]), (-1) ** int(q[2])]


def local_pauli_matrix(bits) -> np.ndarray:
    """Dense 4x4 Hermitian Pauli for a local (x1, z1, x2, z2) pattern."""
    letters = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
    a = PAULI_MATRICES[letters[(int(bits[0]), int(bits[1]))]]
    b = PAULI_MATRICES[letters[(int(bits[2]), int(bits[3]))]]
    return np.kron(a, b)


# -- uniform symplectic sampling by transvections -----------------------


def _inner(v: np.ndarray, w: np.ndarray) -> int:
    return int(np.sum(v[0::2] * w[1::2] + v[1::2] * w[0::2]) % 2)


def _transvection(k: np.ndarray, v: np.ndarray) -> np.ndarray:
    return (v + _inner(k, v) * k) % 2


def _int_to_bits(i: int, n: int) -> np.ndarray:
    return np.array([(i >> j) & 1 for j in range(n)], dtype=np.int64)


def _find_transvection(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectors h1, h2 with y = Z_h1 Z_h2 x (zero vectors act trivially)."""
    out = np.zeros((2, x.size), dtype=np.int64)
    if np.array_equal(x, y):
        return out
    if _inner(x, y) == 1:
        out[0] = (x + y) % 2
        return out
    z = np.zeros(x.size, dtype=np.int64)
    for ii in range(0, x.size, 2):
        if (x[ii] + x[ii + 1]) != 0 and (y[ii] + y[ii + 1]) != 0:
            z[ii] = (x[ii] + y[ii]) % 2
            z[ii + 1] = (x[ii + 1] + y[ii + 1]) % 2
            if (z[ii] + z[ii + 1]) == 0:
                z[ii + 1] = 1
                if x[ii] != x[ii + 1]:
                    z[ii] = 1
            out[0] = (x + z) % 2
            out[1] = (y + z) % 2
            return out
    for ii in range(0, x.size, 2):
        if (x[ii] + x[ii + 1]) != 0 and (y[ii] + y[ii + 1]) == 0:
            if x[ii] == x[ii + 1]:
                z[ii + 1] = 1
            else:
                z[ii + 1] = x[ii]
                z[ii] = x[ii + 1]
            break
    for ii in range(0, x.size, 2):
        if (x[ii] + x[ii + 1]) == 0 and (y[ii] + y[ii + 1]) != 0:
            if y[ii] == y[ii + 1]:
                z[ii + 1] = 1
            else:
                z[ii + 1] = y[ii]
                z[ii] = y[ii + 1]
            break
    out[0] = (x + z) % 2
    out[1] = (y + z) % 2
    return out


def symplectic_order(n: int) -> int:
    """|Sp(2n, 2)|."""
    order = 1
    for j in range(1, n + 1):
        order *= 2 ** (2 * j - 1) * (2 ** (2 * j) - 1)
    return order


def symplectic_matrix(index: int, n: int) -> np.ndarray:
    """
    The symplectic matrix with canonical ``index`` in [0, |Sp(2n, 2)|).

    Rows come in pairs (2i, 2i+1) forming a symplectic basis in the
    interleaved layout. The map index -> matrix is a bijection, so a uniform
    index gives a uniform group element.
    """
    nn = 2 * n
    s = (1 << nn) - 1
    k = (index % s) + 1
    index //= s
    f1 = _int_to_bits(k, nn)
    e1 = np.zeros(nn, dtype=np.int64)
    e1[0] = 1
    t = _find_transvection(e1, f1)
    bits = _int_to_bits(index % (1 << (nn - 1)), nn - 1)
    eprime = e1.copy()
    for j in range(2, nn):
        eprime[j] = bits[j - 1]
    h0 = _transvection(t[0], eprime)
    h0 = _transvection(t[1], h0)
    if bits[0] == 1:
        f1 = f1 * 0
    g = np.eye(nn, dtype=np.int64)
    if n > 1:
        g[2:, 2:] = symplectic_matrix(index >> (nn - 1), n - 1)
    for j in range(nn):
        g[j] = _transvection(t[0], g[j])
        g[j] = _transvection(t[1], g[j])
        g[j] = _transvection(h0, g[j])
        g[j] = _transvection(f1, g[j])
    return g.astype(np.uint8)


# -- groups and lookup tables -------------------------------------------


def sample_two_qubit_clifford(rng: np.random.Generator) -> CliffordGate:
    """Uniformly random two-qubit Clifford modulo phase."""
    return CliffordGate.from_index(int(rng.integers(CLIFFORD_2Q_ORDER)))


@lru_cache(maxsize=None)
def single_qubit_cliffords() -> Tuple[Tuple[np.ndarray, Tuple[int, int]], ...]:
    """
    The 24 single-qubit Cliffords modulo phase as (2x2 image matrix, signs).

    Enumerated by closure of {H, S} acting on the first qubit.
    """
    seen = {}
    start = CliffordGate.identity()
    queue = deque([start])
    seen[start.key()] = start
    gens = (CliffordGate.hadamard(0), CliffordGate.phase(0))
    while queue:
        g = queue.popleft()
        for h in gens:
            c = g.then(h)
            if c.key() not in seen:
                seen[c.key()] = c
                queue.append(c)
    if len(seen) != CLIFFORD_1Q_ORDER:
        raise RuntimeError(f"single-qubit closure found {len(seen)} elements")
    ordered = sorted(seen.values(), key=CliffordGate.key)
    return tuple((c.symplectic[:2, :2].copy(), (int(c.signs[0]), int(c.signs[1]))) for c in ordered)


def tensor_single(a: int, b: int) -> CliffordGate:
    """C_a on qubit 1 tensored with C_b on qubit 2."""
    group = single_qubit_cliffords()
    (ma, sa), (mb, sb) = group[a], group[b]
    m = np.zeros((4, 4), dtype=np.uint8)
    m[:2, :2] = ma
    m[2:, 2:] = mb
    return CliffordGate(m, [sa[0], sa[1], sb[0], sb[1]])


def sample_iswap_dressed(rng: np.random.Generator) -> CliffordGate:
    """iSWAP followed by independent uniform single-qubit Cliffords on both sites."""
    a, b = rng.integers(CLIFFORD_1Q_ORDER, size=2)
    return CliffordGate.iswap().then(tensor_single(int(a), int(b)))


def enumerate_two_qubit_cliffords() -> List[CliffordGate]:
    """All 11520 two-qubit Cliffords by breadth-first closure of {H, S, CNOT}."""
    gens = (
        CliffordGate.hadamard(0), CliffordGate.hadamard(1),
        CliffordGate.phase(0), CliffordGate.phase(1),
        CliffordGate.cnot(),
    )
    start = CliffordGate.identity()
    seen = {start.key(): start}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for h in gens:
            c = g.then(h)
            if c.key() not in seen:
                seen[c.key()] = c
                queue.append(c)
    return list(seen.values())


def _flip_by_sign_word() -> np.ndarray:
    """(16 words, 16 patterns): extra sign from pre-conjugating by Pauli ``word``."""
    p = _LOCAL_PATTERNS.astype(np.int64)
    return ((p @ _OMEGA4 @ p.T) % 2).astype(bool)


@lru_cache(maxsize=None)
def clifford_tables() -> Tuple[np.ndarray, np.ndarray]:
    """
    Lookup tables for every gate index of :meth:`CliffordGate.from_index`.

    Returns:
        (out, flip) arrays of shape (11520, 16)
    """
    out = np.zeros((CLIFFORD_2Q_ORDER, 16), dtype=np.uint8)
    flip = np.zeros((CLIFFORD_2Q_ORDER, 16), dtype=bool)
    word_flip = _flip_by_sign_word()
    for s in range(SYMPLECTIC_4_ORDER):
        base = CliffordGate(symplectic_matrix(s, 2))
        rows = slice(16 * s, 16 * s + 16)
        out[rows] = base.table[None, :]
        flip[rows] = base.flip[None, :] ^ word_flip
    out.setflags(write=False)
    flip.setflags(write=False)
    return out, flip


@lru_cache(maxsize=None)
def iswap_dressed_tables() -> Tuple[np.ndarray, np.ndarray]:
    """Lookup tables for the 576 dressed iSWAP gates, index a * 24 + b."""
    n = CLIFFORD_1Q_ORDER * CLIFFORD_1Q_ORDER
    out = np.zeros((n, 16), dtype=np.uint8)
    flip = np.zeros((n, 16), dtype=bool)
    base = CliffordGate.iswap()
    for a in range(CLIFFORD_1Q_ORDER):
        for b in range(CLIFFORD_1Q_ORDER):
            g = base.then(tensor_single(a, b))
            out[a * CLIFFORD_1Q_ORDER + b] = g.table
            flip[a * CLIFFORD_1Q_ORDER + b] = g.flip
    out.setflags(write=False)
    flip.setflags(write=False)
    return out, flip
