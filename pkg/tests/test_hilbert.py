"""Basis bookkeeping, ladder operators and the conserved parity."""

from __future__ import annotations

import numpy as np
import pytest

from parityqed import BasisState, HilbertSpace
from parityqed.hilbert import QUBIT_LEVELS, QUTRIT_LEVELS


def test_basis_order_is_lexicographic_in_photons_qutrit_qubit():
    space = HilbertSpace(1)
    labels = [s.label for s in space.states]
    assert labels == [
        "g,g,0", "g,e,0", "f,g,0", "f,e,0", "e,g,0", "e,e,0",
        "g,g,1", "g,e,1", "f,g,1", "f,e,1", "e,g,1", "e,e,1",
    ]


def test_index_formula_and_dimension():
    space = HilbertSpace(7)
    assert space.dim == 6 * 8
    for i, s in enumerate(space.states):
        qutrit_idx = QUTRIT_LEVELS.index(s.qutrit)
        qubit_idx = QUBIT_LEVELS.index(s.qubit)
        assert i == 6 * s.photons + 2 * qutrit_idx + qubit_idx
        assert space.index_of(s) == i
        assert space.index_of(s.label) == i


def test_basis_state_validation():
    with pytest.raises(ValueError, match="qutrit"):
        BasisState("x", "g", 0)
    with pytest.raises(ValueError, match="qubit"):
        BasisState("g", "f", 0)
    with pytest.raises(ValueError, match="photon"):
        BasisState("g", "g", -1)


def test_label_round_trip_and_str():
    s = BasisState("f", "e", 3)
    assert BasisState.from_label(s.label) == s
    assert str(s) == "|f,e,3>"


@pytest.mark.parametrize(
    "qutrit,qubit,photons,expected",
    [
        ("g", "g", 0, 0),
        ("g", "e", 0, 1),
        ("f", "g", 0, 1),
        ("f", "e", 0, 2),
        ("e", "g", 0, 2),
        ("e", "e", 0, 3),
        ("g", "g", 5, 5),
        ("e", "e", 2, 5),
    ],
)
def test_excitation_number_weights(qutrit, qubit, photons, expected):
    state = BasisState(qutrit, qubit, photons)
    assert state.excitation_number == expected
    assert state.parity == (-1) ** expected


def test_parity_operator_diagonal_single_photon_block():
    # Frozen oracle: for n_max = 0 the six states in order
    # (g,g), (g,e), (f,g), (f,e), (e,g), (e,e) carry parities
    # (+1, -1, -1, +1, +1, -1).
    space = HilbertSpace(0)
    diag = np.real(np.diag(space.parity_operator()))
    assert diag.tolist() == [1.0, -1.0, -1.0, 1.0, 1.0, -1.0]


def test_parity_indices_partition_the_space():
    space = HilbertSpace(4)
    even, odd = space.parity_indices()
    assert len(even) + len(odd) == space.dim
    assert not set(even) & set(odd)
    n = space.excitation_numbers()
    assert np.all(n[even] % 2 == 0)
    assert np.all(n[odd] % 2 == 1)


def test_annihilation_matrix_elements():
    space = HilbertSpace(3)
    a = space.annihilation()
    for n in range(1, 4):
        src = space.index_of(BasisState("g", "g", n))
        dst = space.index_of(BasisState("g", "g", n - 1))
        assert a[dst, src] == pytest.approx(np.sqrt(n), abs=0.0)
    # top of the ladder annihilates: no column feeds photon number 4
    assert np.all(a[:, space.index_of(BasisState("g", "g", 0))] == 0)


def test_number_operator_matches_annihilation_product():
    space = HilbertSpace(3)
    a = space.annihilation()
    assert np.allclose(a.conj().T @ a, space.number(), atol=1e-15)


def test_quadrature_is_hermitian():
    space = HilbertSpace(2)
    x = space.quadrature()
    assert np.array_equal(x, x.conj().T)


def test_atomic_operators_move_one_level():
    space = HilbertSpace(1)
    low_ef = space.qutrit_lower_ef()
    src = space.index_of(BasisState("e", "g", 1))
    dst = space.index_of(BasisState("f", "g", 1))
    assert low_ef[dst, src] == 1.0
    assert np.count_nonzero(low_ef[:, src]) == 1

    low_fg = space.qutrit_lower_fg()
    assert low_fg[space.index_of("g,e,0"), space.index_of("f,e,0")] == 1.0

    qb = space.qubit_lower()
    assert qb[space.index_of("f,g,1"), space.index_of("f,e,1")] == 1.0


def test_flip_operators_are_hermitian_and_traceless():
    space = HilbertSpace(2)
    for op in (space.qutrit_flip_ef(), space.qutrit_flip_fg(), space.qubit_flip()):
        assert np.array_equal(op, op.conj().T)
        assert np.trace(op) == 0.0


def test_no_direct_ge_qutrit_flip():
    """The forbidden qutrit transition has no operator route: flips touch
    adjacent rungs only."""
    space = HilbertSpace(0)
    combined = space.qutrit_flip_ef() + space.qutrit_flip_fg()
    g_idx = space.index_of(BasisState("g", "g", 0))
    e_idx = space.index_of(BasisState("e", "g", 0))
    assert combined[g_idx, e_idx] == 0.0
    assert combined[e_idx, g_idx] == 0.0


def test_projectors_sum_to_identity():
    space = HilbertSpace(1)
    qutrit_sum = sum(space.qutrit_projector(l) for l in QUTRIT_LEVELS)
    qubit_sum = sum(space.qubit_projector(l) for l in QUBIT_LEVELS)
    assert np.array_equal(qutrit_sum, np.eye(space.dim))
    assert np.array_equal(qubit_sum, np.eye(space.dim))


def test_basis_vector_is_unit():
    space = HilbertSpace(2)
    v = space.basis_vector("e,e,0")
    assert v[space.index_of("e,e,0")] == 1.0
    assert np.sum(np.abs(v)) == 1.0


def test_negative_n_max_rejected():
    with pytest.raises(ValueError):
        HilbertSpace(-1)
