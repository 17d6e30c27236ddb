"""
Subsystem-code tableau: stabilizers, destabilizers, logical pairs and gauge pairs.

Rows are held in one PauliTable in the order

    stabilizers (n_s) | destabilizers (n_s) | logical pairs (2k) | gauge pairs (2g)

with each pair stored as two consecutive rows. Logical pairs are (X-type,
Z-type); gauge pairs are (measured member, partner). Together the rows form
a symplectic basis of the 2N-dimensional Pauli space, so n_s + k + g = N.
"""

import itertools
import logging
import math
from enum import Enum
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from qeclab import constants
from qeclab.clifford import CliffordGate
from qeclab.exceptions import InvalidArgumentError, InvariantError, ResourceLimitError
from qeclab.gf2 import BitMatrix, rank
from qeclab.pauli import PauliOperator, PauliTable

logger = logging.getLogger(__name__)


class MeasurementMode(Enum):
    """Where a measured operator goes when it anticommutes with a logical or gauge member."""

    TO_STABILIZER = "stabilizer"
    TO_GAUGE = "gauge"


class Measurement(NamedTuple):
    outcome: int
    deterministic: bool
    partner: Optional[PauliOperator]  # None unless a logical/gauge partner was designated


class SubsystemCode:
    """Stabilizer or subsystem code on N qubits, as a full symplectic tableau."""

    def __init__(self, table: PauliTable, n_stabilizers: int, n_logical: int, n_gauge: int = 0):
        """
        Initialize a SubsystemCode.

        Args:
            table: rows in the layout described in the module docstring
            n_stabilizers: n_s
            n_logical: number of logical pairs k
            n_gauge: number of gauge pairs
        """
        expected = 2 * (n_stabilizers + n_logical + n_gauge)
        if len(table) != expected:
            raise InvalidArgumentError(f"table has {len(table)} rows, layout needs {expected}")
        if n_stabilizers + n_logical + n_gauge != table.n_qubits:
            raise InvalidArgumentError("n_s + k + g must equal the number of qubits")
        self.table = table
        self.n_stabilizers = n_stabilizers
        self.n_logical = n_logical
        self.n_gauge = n_gauge

    # -- layout ---------------------------------------------------------

    @property
    def n_qubits(self) -> int:
        return self.table.n_qubits

    @property
    def k(self) -> int:
        return self.n_logical

    @property
    def rate(self) -> float:
        return self.n_logical / self.n_qubits

    def _logical_start(self) -> int:
        return 2 * self.n_stabilizers

    def _gauge_start(self) -> int:
        return 2 * self.n_stabilizers + 2 * self.n_logical

    def stabilizers(self) -> PauliTable:
        return self.table.take(np.arange(self.n_stabilizers))

    def destabilizers(self) -> PauliTable:
        return self.table.take(np.arange(self.n_stabilizers, 2 * self.n_stabilizers))

    def logicals(self) -> PauliTable:
        """Logical generators in column order X1, Z1, X2, Z2, ..."""
        start = self._logical_start()
        return self.table.take(np.arange(start, start + 2 * self.n_logical))

    def gauges(self) -> PauliTable:
        """Gauge generators in order g1, partner1, g2, partner2, ..."""
        start = self._gauge_start()
        return self.table.take(np.arange(start, start + 2 * self.n_gauge))

    def logical_pairs(self) -> List[Tuple[PauliOperator, PauliOperator]]:
        rows = self.logicals().paulis()
        return list(zip(rows[0::2], rows[1::2]))

    def gauge_pairs(self) -> List[Tuple[PauliOperator, PauliOperator]]:
        rows = self.gauges().paulis()
        return list(zip(rows[0::2], rows[1::2]))

    def measured_gauges(self) -> PauliTable:
        start = self._gauge_start()
        return self.table.take(np.arange(start, start + 2 * self.n_gauge, 2))

    def copy(self) -> "SubsystemCode":
        return SubsystemCode(self.table.copy(), self.n_stabilizers, self.n_logical, self.n_gauge)

    def syndrome(self, p: PauliOperator) -> np.ndarray:
        """Commutator bits of ``p`` with every stabilizer."""
        return self.stabilizers().commutation_with(p)

    # -- gates ----------------------------------------------------------

    def apply_layer(self, pairs, out: np.ndarray, flip: np.ndarray) -> "SubsystemCode":
        """
        Conjugate every row by a layer of disjoint two-qubit gates, in place.

        Args:
            pairs: (P, 2) site pairs, no site used twice
            out: (P, 16) output pattern tables, one per gate
            flip: (P, 16) sign-flip tables, one per gate

        Returns:
            self
        """
        pairs = np.asarray(pairs, dtype=np.intp).reshape(-1, 2)
        if pairs.size == 0:
            return self
        n = self.n_qubits
        if pairs.min() < 0 or pairs.max() >= n:
            raise InvalidArgumentError(f"site out of range for {n} qubits")
        if np.any(pairs[:, 0] == pairs[:, 1]):
            raise InvalidArgumentError("gate sites must differ")
        if np.unique(pairs).size != pairs.size:
            raise InvalidArgumentError("pairs in a layer must be disjoint")
        a, b = pairs[:, 0], pairs[:, 1]
        t = self.table
        idx = (8 * t.x[:, a] + 4 * t.z[:, a] + 2 * t.x[:, b] + t.z[:, b]).astype(np.intp)
        gate = np.arange(pairs.shape[0])[None, :]
        new = out[gate, idx]
        flips = flip[gate, idx]
        t.x[:, a] = (new >> 3) & 1
        t.z[:, a] = (new >> 2) & 1
        t.x[:, b] = (new >> 1) & 1
        t.z[:, b] = new & 1
        odd = (np.count_nonzero(flips, axis=1) % 2).astype(bool)
        t.sign[odd] = -t.sign[odd]
        if constants.DEBUG_INVARIANTS:
            self.check_invariants()
        return self

    def apply_gate(self, gate: CliffordGate, sites: Tuple[int, int]) -> "SubsystemCode":
        """Conjugate every row by ``gate`` on ``sites``, in place."""
        return self.apply_layer([sites], gate.table[None, :], gate.flip[None, :])

    # -- measurement ----------------------------------------------------

    def measure(self, g: PauliOperator, rng: np.random.Generator,
                mode: MeasurementMode = MeasurementMode.TO_STABILIZER) -> Measurement:
        """
        Projectively measure ``g``, updating the tableau in place.

        In TO_STABILIZER mode a repeated measurement of ``g`` is deterministic
        and returns the same outcome. In TO_GAUGE mode ``g`` becomes a gauge
        member, its partner is still a gauge operator, so measuring ``g``
        again anticommutes with that partner and gives a fresh random outcome.

        Args:
            g: Pauli on N qubits; the outcome is its eigenvalue, sign included
            rng: source of the fair coin for random outcomes
            mode: what becomes of ``g`` when it only anticommutes with logical
                or gauge members

        Returns:
            Measurement(outcome, deterministic, partner)
        """
        if g.n_qubits != self.n_qubits:
            raise InvalidArgumentError(f"operator has {g.n_qubits} qubits, code has {self.n_qubits}")
        mode = MeasurementMode(mode)
        comm = self.table.commutation_with(g)
        ns = self.n_stabilizers

        anti_stab = np.flatnonzero(comm[:ns])
        if anti_stab.size:
            result = self._measure_anticommuting_stabilizer(g, comm, int(anti_stab[0]), rng)
        else:
            anti_pair = np.flatnonzero(comm[2 * ns:])
            if anti_pair.size == 0:
                result = self._measure_deterministic(g, comm)
            else:
                result = self._measure_pair_member(g, comm, 2 * ns + int(anti_pair[0]), rng, mode)
        if constants.DEBUG_INVARIANTS:
            self.check_invariants()
        return result

    def _measure_anticommuting_stabilizer(self, g, comm, p, rng) -> Measurement:
        ns = self.n_stabilizers
        targets = np.flatnonzero(comm)
        targets = targets[(targets != p) & (targets != ns + p)]
        self.table.multiply_rows(targets, p)
        old = self.table.row(p)
        outcome = 1 if rng.integers(2) == 0 else -1
        self.table.set_row(ns + p, old)
        self.table.set_row(p, PauliOperator(g.x, g.z, g.sign * outcome))
        logger.debug("measured %s: stabilizer %d replaced, outcome %+d", g, p, outcome)
        return Measurement(outcome, False, None)

    def _measure_deterministic(self, g, comm) -> Measurement:
        ns = self.n_stabilizers
        acc = PauliOperator.identity(self.n_qubits)
        for q in np.flatnonzero(comm[ns:2 * ns]):
            acc = acc * self.table.row(int(q))
        if acc.x != g.x or acc.z != g.z:
            raise InvariantError(f"{g} commutes with every generator but is not a stabilizer")
        return Measurement(g.sign * acc.sign, True, None)

    def _measure_pair_member(self, g, comm, b_row, rng, mode) -> Measurement:
        ns = self.n_stabilizers
        pair_start = b_row - ((b_row - 2 * ns) % 2)
        mate_row = pair_start + 1 if b_row == pair_start else pair_start
        partner = self.table.row(b_row)

        targets = np.flatnonzero(comm)
        targets = targets[(targets >= ns) & (targets != b_row) & (targets != mate_row)]
        self.table.multiply_by(targets, partner)

        outcome = 1 if rng.integers(2) == 0 else -1
        measured = PauliOperator(g.x, g.z, g.sign * outcome)
        in_logical = pair_start < self._gauge_start()

        keep = np.ones(len(self.table), dtype=bool)
        # both members of the old pair leave; (measured, partner) replaces them
        keep[[pair_start, pair_start + 1]] = False
        t = self.table
        stab = t.take(np.arange(ns))
        destab = t.take(np.arange(ns, 2 * ns))
        rest = t.take(np.flatnonzero(keep[2 * ns:]) + 2 * ns)
        n_logical = self.n_logical - (1 if in_logical else 0)
        n_gauge = self.n_gauge - (0 if in_logical else 1)
        new_pair = PauliTable.from_paulis([measured, partner])
        if mode is MeasurementMode.TO_STABILIZER:
            self.table = PauliTable.concatenate([
                stab, PauliTable.from_paulis([measured]),
                destab, PauliTable.from_paulis([partner]),
                rest,
            ])
            self.n_stabilizers = ns + 1
        else:
            self.table = PauliTable.concatenate([stab, destab, rest, new_pair])
            n_gauge += 1
        self.n_logical = n_logical
        self.n_gauge = n_gauge
        logger.debug("measured %s into %s, outcome %+d, k=%d", g, mode.value, outcome, self.n_logical)
        return Measurement(outcome, False, partner)

    # -- invariants -----------------------------------------------------

    def expected_commutation(self) -> np.ndarray:
        """Symplectic Gram matrix the rows must have."""
        ns = self.n_stabilizers
        size = len(self.table)
        gram = np.zeros((size, size), dtype=np.uint8)
        idx = np.arange(ns)
        gram[idx, ns + idx] = 1
        gram[ns + idx, idx] = 1
        first = np.arange(2 * ns, size, 2)
        gram[first, first + 1] = 1
        gram[first + 1, first] = 1
        return gram

    def check_invariants(self):
        """
        Raises:
            InvariantError: if the rows are not a symplectic basis in layout order
        """
        gram = self.table.commutation_matrix(self.table)
        bad = np.argwhere(gram != self.expected_commutation())
        if bad.size:
            i, j = (int(v) for v in bad[0])
            raise InvariantError(f"rows {i} and {j} have the wrong commutator ({len(bad)} violations)")

    # -- text format ----------------------------------------------------

    def dump(self) -> str:
        """Plain-text tableau: one signed Pauli per line under section headers."""
        lines = [f"# N={self.n_qubits} n_s={self.n_stabilizers} k={self.n_logical} gauge={self.n_gauge}"]
        for header, table in (
            ("STAB", self.stabilizers()),
            ("DESTAB", self.destabilizers()),
            ("LOGICAL", self.logicals()),
            ("GAUGE", self.gauges()),
        ):
            lines.append(header)
            lines.extend(str(p) for p in table.paulis())
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse(text: str) -> "SubsystemCode":
        """Inverse of :meth:`dump`."""
        sections = {"STAB": [], "DESTAB": [], "LOGICAL": [], "GAUGE": []}
        current = None
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line in sections:
                current = line
                continue
            if current is None:
                raise InvalidArgumentError(f"generator before any section header: '{line}'")
            sections[current].append(PauliOperator.from_string(line))
        rows = sections["STAB"] + sections["DESTAB"] + sections["LOGICAL"] + sections["GAUGE"]
        if not rows:
            raise InvalidArgumentError("empty tableau")
        if len(sections["STAB"]) != len(sections["DESTAB"]):
            raise InvalidArgumentError("stabilizer and destabilizer counts differ")
        if len(sections["LOGICAL"]) % 2 or len(sections["GAUGE"]) % 2:
            raise InvalidArgumentError("logical and gauge sections need whole pairs")
        code = SubsystemCode(
            PauliTable.from_paulis(rows),
            len(sections["STAB"]),
            len(sections["LOGICAL"]) // 2,
            len(sections["GAUGE"]) // 2,
        )
        code.check_invariants()
        return code

    def __eq__(self, other):
        if not isinstance(other, SubsystemCode):
            return NotImplemented
        return (
            (self.n_stabilizers, self.n_logical, self.n_gauge) == (other.n_stabilizers, other.n_logical, other.n_gauge)
            and np.array_equal(self.table.x, other.table.x)
            and np.array_equal(self.table.z, other.table.z)
            and np.array_equal(self.table.sign, other.table.sign)
        )

    def __repr__(self):
        return (f"SubsystemCode(N={self.n_qubits}, n_s={self.n_stabilizers}, "
                f"k={self.n_logical}, gauge={self.n_gauge})")


def spread_logical_sites(n_qubits: int, k: int) -> List[int]:
    """k logical sites spread evenly over the register (every other site at rate 1/2)."""
    if not 0 <= k <= n_qubits:
        raise InvalidArgumentError(f"cannot place {k} logicals on {n_qubits} sites")
    return [(2 * i + 1) * n_qubits // (2 * k) for i in range(k)]


def trivial_code(n_qubits: int, logical_sites: Sequence[int]) -> SubsystemCode:
    """
    Unencoded code: Z_i stabilizers off the logical sites, (X_j, Z_j) pairs on them.
    """
    logical_sites = sorted(set(int(s) for s in logical_sites))
    if any(not 0 <= s < n_qubits for s in logical_sites):
        raise InvalidArgumentError(f"logical sites must lie in [0, {n_qubits})")
    others = [i for i in range(n_qubits) if i not in set(logical_sites)]
    rows = (
        [PauliOperator.single(n_qubits, i, "Z") for i in others]
        + [PauliOperator.single(n_qubits, i, "X") for i in others]
    )
    for j in logical_sites:
        rows += [PauliOperator.single(n_qubits, j, "X"), PauliOperator.single(n_qubits, j, "Z")]
    return SubsystemCode(PauliTable.from_paulis(rows, n_qubits), len(others), len(logical_sites))


def apply_gate(code: SubsystemCode, gate: CliffordGate, sites: Tuple[int, int]) -> SubsystemCode:
    return code.apply_gate(gate, sites)


def measure_pauli(code: SubsystemCode, g: PauliOperator, rng: np.random.Generator,
                  mode: MeasurementMode = MeasurementMode.TO_STABILIZER) -> Tuple[int, SubsystemCode]:
    """Measure ``g`` on ``code`` (updated in place); returns (outcome, code)."""
    return code.measure(g, rng, mode).outcome, code


# -- entropies -----------------------------------------------------------


def _state_generators(code: SubsystemCode) -> PauliTable:
    """Generators of the stabilizer group of the code-space density matrix."""
    return PauliTable.concatenate([code.stabilizers(), code.measured_gauges()])


def code_space_entropy(code: SubsystemCode) -> int:
    """Entropy in bits of the maximally mixed code-space state, N - n_s - g."""
    return code.n_qubits - code.n_stabilizers - code.n_gauge


def entanglement_entropy(code: SubsystemCode, region: Sequence[int]) -> int:
    """
    S(rho_A) in bits for the code-space state.

    S(A) = |A| - #(independent group elements supported inside A); the
    count is the number of generators minus the rank of their restriction
    to the complement of A.
    """
    region = sorted(set(int(s) for s in region))
    n = code.n_qubits
    if any(not 0 <= s < n for s in region):
        raise InvalidArgumentError(f"region sites must lie in [0, {n})")
    gens = _state_generators(code)
    if len(gens) == 0:
        return len(region)
    outside = np.setdiff1d(np.arange(n), region)
    restricted = np.hstack([gens.x[:, outside], gens.z[:, outside]])
    inside = len(gens) - rank(BitMatrix.from_bits(restricted)) if outside.size else len(gens)
    return len(region) - inside


def mutual_information(code: SubsystemCode, a: Sequence[int], b: Sequence[int]) -> int:
    """I(A:B) = S(A) + S(B) - S(AB) for disjoint regions."""
    if set(a) & set(b):
        raise InvalidArgumentError("regions must be disjoint")
    return (entanglement_entropy(code, a) + entanglement_entropy(code, b)
            - entanglement_entropy(code, list(a) + list(b)))


def purified_state_generators(code: SubsystemCode) -> PauliTable:
    """
    Generators of a pure state on system (sites 0..N-1) + reference (N..N+k-1).

    Logical pair j is maximally entangled with reference qubit N + j through
    the generators X_j ⊗ X_R and Z_j ⊗ Z_R; measured gauge members are fixed.
    """
    n, k = code.n_qubits, code.n_logical
    base = _state_generators(code)
    logicals = code.logicals()
    ref = np.zeros((len(logicals), k), dtype=np.uint8)
    pair = np.arange(k)
    x_ref, z_ref = ref.copy(), ref.copy()
    x_ref[2 * pair, pair] = 1
    z_ref[2 * pair + 1, pair] = 1
    empty = np.zeros((len(base), k), dtype=np.uint8)
    table = PauliTable(
        np.vstack([np.hstack([base.x, empty]), np.hstack([logicals.x, x_ref])]),
        np.vstack([np.hstack([base.z, empty]), np.hstack([logicals.z, z_ref])]),
        np.concatenate([base.sign, logicals.sign]),
    )
    if len(table) != n + k:
        raise InvariantError("purified state does not have N + k generators")
    return table


# -- distance ------------------------------------------------------------


def distance_bruteforce(code: SubsystemCode) -> float:
    """
    Minimum weight of a Pauli with zero syndrome that anticommutes with a logical.

    Candidates are enumerated weight by weight, so the cost is bounded by
    4^N but stops at the first hit.

    Returns:
        the distance, or math.inf when k = 0

    Raises:
        ResourceLimitError: if N exceeds MAX_DISTANCE_QUBITS
    """
    n = code.n_qubits
    if n > constants.MAX_DISTANCE_QUBITS:
        raise ResourceLimitError(f"distance enumeration limited to {constants.MAX_DISTANCE_QUBITS} qubits, got {n}")
    if code.n_logical == 0:
        return math.inf
    stab, logi = code.stabilizers(), code.logicals()
    sx, sz = stab.x.astype(np.int32), stab.z.astype(np.int32)
    lx, lz = logi.x.astype(np.int32), logi.z.astype(np.int32)
    for w in range(1, n + 1):
        supports = np.array(list(itertools.combinations(range(n), w)), dtype=np.intp)
        letters = np.array(list(itertools.product((1, 2, 3), repeat=w)), dtype=np.uint8)
        c, l = supports.shape[0], letters.shape[0]
        x = np.zeros((c, l, n), dtype=np.int32)
        z = np.zeros((c, l, n), dtype=np.int32)
        ci = np.arange(c)[:, None, None]
        li = np.arange(l)[None, :, None]
        x[ci, li, supports[:, None, :]] = (letters & 1)[None, :, :]
        z[ci, li, supports[:, None, :]] = (letters >> 1)[None, :, :]
        x = x.reshape(c * l, n)
        z = z.reshape(c * l, n)
        zero_syndrome = ~np.any((x @ sz.T + z @ sx.T) % 2, axis=1) if len(stab) else np.ones(c * l, bool)
        logical = np.any((x @ lz.T + z @ lx.T) % 2, axis=1)
        if np.any(zero_syndrome & logical):
            return w
    return math.inf
