"""
Tests for Pauli operators and Pauli tables.
"""

import itertools
import sys
from pathlib import Path

import numpy as np
import pytest

# Try importing directly first (if package is installed)
try:
    from qeclab.clifford import PAULI_MATRICES
    from qeclab.exceptions import InvalidArgumentError
    from qeclab.pauli import PauliOperator, PauliTable, product_phase, symplectic_product
except ImportError:
    # If not installed, add src to path
    test_dir = Path(__file__).parent
    src_dir = test_dir.parent / 'src'
    sys.path.insert(0, str(src_dir))
    from qeclab.clifford import PAULI_MATRICES
    from qeclab.exceptions import InvalidArgumentError
    from qeclab.pauli import PauliOperator, PauliTable, product_phase, symplectic_product

# Import the test runner
try:
    from tests.test_runner import run_tests
except ImportError:
    from test_runner import run_tests

LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


def test_parse_and_label():
    p = PauliOperator.from_string("-XIZY")
    assert p.sign == -1
    assert p.label() == "XIZY"
    assert str(p) == "-XIZY"
    assert p.weight() == 3
    assert p.support() == [0, 2, 3]
    with pytest.raises(InvalidArgumentError):
        PauliOperator.from_string("XQ")


def test_product_phase_matches_matrices():
    """i^e H(a) H(b) bookkeeping agrees with 2x2 matrix products for every pair."""
    for a, b in itertools.product("IXYZ", repeat=2):
        xa, za = LETTER_BITS[a]
        xb, zb = LETTER_BITS[b]
        e = int(product_phase([xa], [za], [xb], [zb]))
        c = next(k for k, v in LETTER_BITS.items() if v == (xa ^ xb, za ^ zb))
        lhs = PAULI_MATRICES[a] @ PAULI_MATRICES[b]
        assert np.allclose(lhs, (1j ** e) * PAULI_MATRICES[c]), (a, b, e)


def test_commutation():
    x = PauliOperator.from_string("X")
    z = PauliOperator.from_string("Z")
    assert symplectic_product(x, z) == 1
    assert not x.commutes_with(z)
    assert PauliOperator.from_string("XX").commutes_with(PauliOperator.from_string("ZZ"))
    with pytest.raises(InvalidArgumentError):
        symplectic_product(x, PauliOperator.from_string("XX"))


def test_commuting_product_sign():
    """XX * ZZ = -YY under the Y = iXZ convention."""
    p = PauliOperator.from_string("XX") * PauliOperator.from_string("ZZ")
    assert p == PauliOperator.from_string("-YY")
    with pytest.raises(InvalidArgumentError):
        PauliOperator.from_string("X") * PauliOperator.from_string("Z")


def test_table_multiply_and_commutation():
    t = PauliTable.from_paulis([PauliOperator.from_string(s) for s in ("XX", "ZI", "-ZZ")])
    assert np.array_equal(t.commutation_with(PauliOperator.from_string("ZI")), [1, 0, 0])
    gram = t.commutation_matrix(t)
    assert np.array_equal(gram, gram.T)
    assert gram[0, 1] == 1 and gram[0, 2] == 0

    t.multiply_rows([0], 2)
    assert t.row(0) == PauliOperator.from_string("YY")
    with pytest.raises(InvalidArgumentError):
        t.multiply_rows([1], 0)


if __name__ == "__main__":
    run_tests("Testing Pauli operators")
