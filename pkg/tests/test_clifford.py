"""
Tests for two-qubit Clifford gates and their lookup tables.
"""

import itertools
import sys
from pathlib import Path

import numpy as np

# Try importing directly first (if package is installed)
try:
    from qeclab.clifford import (
        ISWAP_MATRIX,
        CliffordGate,
        clifford_tables,
        enumerate_two_qubit_cliffords,
        iswap_dressed_tables,
        local_pauli_matrix,
        single_qubit_cliffords,
        symplectic_matrix,
        symplectic_order,
        tensor_single,
    )
    from qeclab.pauli import PauliOperator
except ImportError:
    # If not installed, add src to path
    test_dir = Path(__file__).parent
    src_dir = test_dir.parent / 'src'
    sys.path.insert(0, str(src_dir))
    from qeclab.clifford import (
        ISWAP_MATRIX,
        CliffordGate,
        clifford_tables,
        enumerate_two_qubit_cliffords,
        iswap_dressed_tables,
        local_pauli_matrix,
        single_qubit_cliffords,
        symplectic_matrix,
        symplectic_order,
        tensor_single,
    )
    from qeclab.pauli import PauliOperator

# Import the test runner
try:
    from tests.test_runner import run_tests
except ImportError:
    from test_runner import run_tests

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def _dense(p: PauliOperator) -> np.ndarray:
    bits = [p.x[0], p.z[0], p.x[1], p.z[1]]
    return p.sign * local_pauli_matrix(bits)


def _all_two_qubit_paulis():
    for a, b in itertools.product("IXYZ", repeat=2):
        for sign in ("+", "-"):
            yield PauliOperator.from_string(sign + a + b)


def _agrees_with_unitary(gate: CliffordGate, u: np.ndarray) -> bool:
    return all(
        np.allclose(_dense(gate.conjugate(p)), u @ _dense(p) @ u.conj().T)
        for p in _all_two_qubit_paulis()
    )


def test_cnot_images():
    images = [str(p) for p in CliffordGate.cnot().images()]
    assert images == ["+XX", "+ZI", "+IX", "+ZZ"]


def test_iswap_images():
    """iSWAP sends X1 to Z1 Y2 and Z1 to Z2."""
    g = CliffordGate.iswap()
    assert g.conjugate(PauliOperator.from_string("XI")) == PauliOperator.from_string("ZY")
    assert g.conjugate(PauliOperator.from_string("ZI")) == PauliOperator.from_string("IZ")
    assert g.is_symplectic()


def test_tables_agree_with_dense_unitaries():
    assert _agrees_with_unitary(CliffordGate.cnot(), CNOT)
    assert _agrees_with_unitary(CliffordGate.iswap(), ISWAP_MATRIX)
    assert _agrees_with_unitary(CliffordGate.hadamard(1), np.kron(np.eye(2), HADAMARD))


def test_composition_order():
    """S then H maps X to -Y."""
    g = CliffordGate.phase(0).then(CliffordGate.hadamard(0))
    assert g.conjugate(PauliOperator.from_string("XI")) == PauliOperator.from_string("-YI")
    h = CliffordGate.hadamard(0).then(CliffordGate.phase(0))
    assert h.conjugate(PauliOperator.from_string("XI")) == PauliOperator.from_string("ZI")


def test_symplectic_indexing_is_a_bijection():
    assert symplectic_order(1) == 6
    assert symplectic_order(2) == 720
    seen = set()
    for i in range(720):
        m = symplectic_matrix(i, 2)
        assert CliffordGate(m).is_symplectic(), i
        seen.add(m.tobytes())
    assert len(seen) == 720


def test_index_enumeration_matches_group_closure():
    """All 11520 indices are distinct gates and coincide with the closure of {H, S, CNOT}."""
    by_index = {CliffordGate.from_index(i).key() for i in range(11520)}
    assert len(by_index) == 11520
    closure = {g.key() for g in enumerate_two_qubit_cliffords()}
    assert closure == by_index


def test_lookup_tables_match_gates():
    out, flip = clifford_tables()
    assert out.shape == (11520, 16) and flip.shape == (11520, 16)
    rng = np.random.default_rng(0)
    for i in rng.integers(11520, size=50):
        g = CliffordGate.from_index(int(i))
        assert np.array_equal(out[i], g.table)
        assert np.array_equal(flip[i], g.flip)


def test_single_qubit_group_and_dressed_iswap():
    group = single_qubit_cliffords()
    assert len(group) == 24
    out, flip = iswap_dressed_tables()
    assert out.shape == (576, 16)
    g = CliffordGate.iswap().then(tensor_single(5, 17))
    assert np.array_equal(out[5 * 24 + 17], g.table)
    assert np.array_equal(flip[5 * 24 + 17], g.flip)


def test_identity_table_is_trivial():
    g = CliffordGate.identity()
    assert np.array_equal(g.table, np.arange(16))
    assert not g.flip.any()


if __name__ == "__main__":
    run_tests("Testing two-qubit Cliffords")
