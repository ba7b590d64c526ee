"""Diagonalization, parity purity, crossing search and hybrid fidelities."""

from __future__ import annotations

import numpy as np
import pytest

from parityqed import (
    CrossingNotFoundError,
    HilbertSpace,
    SystemParams,
    build_total,
    diagonalize,
    eigensystem,
    find_avoided_crossing,
    hybrid_fidelities,
    level_curve,
)

LAMBDA_ZERO_LOWEST_SEVEN = (0.0, 0.3, 1.0, 1.0, 1.3, 2.0, 2.0)


def test_zero_coupling_spectrum_is_bare(space10):
    """Frozen oracle: bare level stack at delta = 0.4, omega_c = 2."""
    p = SystemParams.default(2.0, 0.4, 0.0)
    eig = eigensystem(space10, p)
    assert np.allclose(eig.energies[:7], LAMBDA_ZERO_LOWEST_SEVEN, atol=1e-14)


def test_eigenvectors_are_parity_pure(space10, reference_params):
    eig = eigensystem(space10, reference_params)
    pi = space10.parity_operator()
    expectations = np.real(np.einsum("ak,ab,bk->k", eig.states.conj(), pi, eig.states))
    assert np.min(np.abs(expectations)) > 1.0 - 1e-12


def test_eigen_decomposition_reconstructs_h(space10, reference_params):
    eig = eigensystem(space10, reference_params)
    h = build_total(space10, reference_params)
    rebuilt = eig.states @ np.diag(eig.energies) @ eig.states.conj().T
    assert np.max(np.abs(rebuilt - h)) < 1e-12


def test_diagonalize_rejects_nonhermitian():
    m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(ValueError, match="Hermitian"):
        diagonalize(m)


def test_diagonalize_blocked_and_plain_agree():
    space = HilbertSpace(3)
    p = SystemParams.default(2.0, 0.4, 0.1, n_max=3)
    h = build_total(space, p)
    w_blocked, _ = diagonalize(h, parity=space.parity_operator())
    w_plain, _ = diagonalize(h)
    assert np.allclose(w_blocked, w_plain, atol=1e-12)


def test_eigenvector_phases_are_deterministic(space10, reference_params):
    a = eigensystem(space10, reference_params)
    b = eigensystem(space10, reference_params)
    assert np.array_equal(a.states, b.states)
    # phase convention: the largest-magnitude component is real positive
    k = 5
    i = int(np.argmax(np.abs(a.states[:, k])))
    pivot = a.states[i, k]
    assert pivot.imag == 0.0 and pivot.real > 0.0


def test_to_dressed_preserves_trace(space10, reference_params):
    eig = eigensystem(space10, reference_params)
    n_op = space10.number()
    assert np.trace(eig.to_dressed(n_op)) == pytest.approx(
        np.trace(n_op).real, rel=1e-12
    )


def test_level_curve_shape(space10, reference_params):
    grid = np.linspace(1.95, 2.05, 5)
    curves = level_curve(space10, reference_params, grid, levels=[5, 6])
    assert curves.shape == (5, 2)
    assert np.all(curves[:, 1] >= curves[:, 0])


def test_reference_crossing_location_and_gap(reference_crossing):
    """Regression values for the central avoided crossing."""
    assert reference_crossing.omega_c_star == pytest.approx(1.9736388, abs=1e-6)
    assert reference_crossing.gap == pytest.approx(7.5910718e-4, rel=1e-6)
    assert (reference_crossing.level_lower, reference_crossing.level_upper) == (5, 6)


def test_crossing_levels_are_half_half_mixtures(reference_crossing):
    c = reference_crossing
    for w in (
        c.overlap_photon_lower,
        c.overlap_excited_lower,
        c.overlap_photon_upper,
        c.overlap_excited_upper,
    ):
        assert 0.4 < w < 0.6


def test_zero_coupling_gap_is_exactly_zero(space10):
    p = SystemParams.default(2.0, 0.4, 0.0)
    crossing = find_avoided_crossing(space10, p, (1.9, 2.1))
    assert crossing.gap == 0.0
    assert crossing.omega_c_star == pytest.approx(2.0, abs=1e-8)


def test_crossing_not_found_outside_bracket(space10, reference_params):
    with pytest.raises(CrossingNotFoundError, match="monotone|endpoint"):
        find_avoided_crossing(space10, reference_params, (2.2, 2.4))


def test_level_pair_must_be_adjacent(space10, reference_params):
    with pytest.raises(ValueError, match="adjacent"):
        find_avoided_crossing(space10, reference_params, level_pair=(4, 6))


def test_explicit_level_pair_matches_automatic(space10, reference_params, reference_crossing):
    explicit = find_avoided_crossing(
        space10, reference_params, (1.9, 2.1), level_pair=(5, 6)
    )
    assert explicit.omega_c_star == pytest.approx(
        reference_crossing.omega_c_star, abs=1e-9
    )
    assert explicit.gap == pytest.approx(reference_crossing.gap, rel=1e-9)


def test_hybrid_fidelities_at_reference_crossing(crossing_eigensystem):
    fid = hybrid_fidelities(crossing_eigensystem)
    assert fid.adjacent
    assert {fid.index_plus, fid.index_minus} == {5, 6}
    assert fid.fidelity_plus == pytest.approx(0.9910132, abs=1e-6)
    assert fid.fidelity_minus == pytest.approx(0.9873443, abs=1e-6)


def test_hybrid_fidelities_zero_coupling_degenerate_tie(space10):
    """With no coupling the hybrids overlap two exactly degenerate bare
    levels equally; the tie-break must still return two distinct levels."""
    p = SystemParams.default(2.0, 0.4, 0.0)
    fid = hybrid_fidelities(eigensystem(space10, p))
    assert fid.index_plus != fid.index_minus
    assert fid.adjacent
    assert fid.fidelity_plus == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-12)
    assert fid.fidelity_minus == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-12)
