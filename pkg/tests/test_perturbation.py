"""Path enumeration and the third-order effective coupling."""

from __future__ import annotations

import math

import numpy as np
import pytest

from parityqed import (
    BasisState,
    HilbertSpace,
    PathEnumeration,
    SingularPathError,
    SystemParams,
    closed_form_coupling,
    enumerate_paths,
    path_sum_coupling,
)
from parityqed.spectral import EXCITED_STATE, PHOTON_STATE

REFERENCE_COUPLING = 3.4128834084418597e-4  # (16 sqrt2/3) 0.4 (0.1)^3 / (9 - 0.16)


@pytest.fixture(scope="module")
def space():
    return HilbertSpace(6)


@pytest.fixture(scope="module")
def params():
    return SystemParams.default(2.0, 0.4, 0.1, n_max=6)


def test_exactly_six_third_order_paths(space, params):
    enum = enumerate_paths(space, params, PHOTON_STATE, EXCITED_STATE, order=3)
    assert len(enum.paths) == 6
    assert enum.truncation_excluded == 0


def test_reference_path_is_enumerated(space, params):
    """The photon-emission route through |f,g,2> must appear."""
    enum = enumerate_paths(space, params, PHOTON_STATE, EXCITED_STATE, order=3)
    sequences = {tuple(s.label for s in p.states) for p in enum.paths}
    assert ("g,g,1", "f,g,2", "f,e,1", "e,e,0") in sequences


def test_every_path_flips_three_rungs(space, params):
    enum = enumerate_paths(space, params, PHOTON_STATE, EXCITED_STATE, order=3)
    for path in enum.paths:
        assert path.order == 3
        assert sorted(path.channels) == ["qubit", "qutrit_ef", "qutrit_fg"]
        photons = [s.photons for s in path.states]
        assert all(abs(a - b) == 1 for a, b in zip(photons, photons[1:]))


def test_paths_preserve_parity_stepwise(space, params):
    enum = enumerate_paths(space, params, PHOTON_STATE, EXCITED_STATE, order=3)
    for path in enum.paths:
        parities = {s.parity for s in path.states}
        assert len(parities) == 1


def test_reference_path_contribution(space, params):
    """Hand value for |g,g,1> -> |f,g,2> -> |f,e,1> -> |e,e,0>:
    step amplitudes (sqrt2, sqrt2, sqrt2) -- photon emission 1->2, photon
    absorption 2->1, then the upper-rung flip -- with channel couplings
    lambda^3 and denominators (delta-5)/2 and (delta-3)/2."""
    enum = enumerate_paths(space, params, PHOTON_STATE, EXCITED_STATE, order=3)
    path = next(
        p
        for p in enum.paths
        if tuple(s.label for s in p.states)
        == ("g,g,1", "f,g,2", "f,e,1", "e,e,0")
    )
    d1, d2 = path.energy_denominators
    assert d1 == pytest.approx((0.4 - 5.0) / 2.0, abs=1e-14)
    assert d2 == pytest.approx((0.4 - 3.0) / 2.0, abs=1e-14)
    amps = np.prod(path.step_amplitudes)
    assert amps == pytest.approx(2.0 * np.sqrt(2.0), rel=1e-14)
    contribution = 0.1**3 * amps / (d1 * d2)
    expected = 8.0 * np.sqrt(2.0) * 0.1**3 / ((5.0 - 0.4) * (3.0 - 0.4))
    assert contribution == pytest.approx(expected, rel=1e-12)


def test_path_sum_matches_closed_form(space, params):
    enum = enumerate_paths(space, params, PHOTON_STATE, EXCITED_STATE, order=3)
    total = path_sum_coupling(enum, params)
    closed = closed_form_coupling(params)
    assert closed == pytest.approx(REFERENCE_COUPLING, rel=1e-15)
    assert abs(total - closed) / closed < 1e-12


def test_closed_form_frozen_values():
    p1 = SystemParams.default(2.0, 0.4, 0.1)
    assert closed_form_coupling(p1) == pytest.approx(3.4128834084418597e-4, rel=1e-15)
    p2 = SystemParams.default(2.0, 0.4, 0.05)
    assert closed_form_coupling(p2) == pytest.approx(4.2661042605523246e-5, rel=1e-15)


def test_coupling_scales_with_lambda_cubed():
    weak = closed_form_coupling(SystemParams.default(2.0, 0.4, 0.05))
    strong = closed_form_coupling(SystemParams.default(2.0, 0.4, 0.1))
    assert strong / weak == pytest.approx(8.0, rel=1e-12)


def test_coupling_vanishes_at_zero_anharmonicity():
    space = HilbertSpace(3)
    p = SystemParams.default(2.0, 0.0, 0.1, n_max=3)
    assert closed_form_coupling(p) == 0.0
    enum = enumerate_paths(space, p, PHOTON_STATE, EXCITED_STATE, order=3)
    assert path_sum_coupling(enum, p) < 1e-15


def test_opposite_parity_endpoints_have_no_paths(space, params):
    for order in range(1, 6):
        enum = enumerate_paths(space, params, "g,g,0", "g,g,1", order=order)
        assert enum.paths == ()
        enum = enumerate_paths(space, params, "e,e,0", "g,g,0", order=order)
        assert enum.paths == ()


def test_even_order_cannot_connect_the_transfer_states(space, params):
    enum = enumerate_paths(space, params, PHOTON_STATE, EXCITED_STATE, order=2)
    assert enum.paths == ()


def test_truncation_excluded_paths_are_counted():
    space = HilbertSpace(1)
    p = SystemParams.default(2.0, 0.4, 0.1, n_max=1)
    enum = enumerate_paths(space, p, PHOTON_STATE, EXCITED_STATE, order=3)
    # the photon-emission branch needs an intermediate two-photon state
    assert enum.truncation_excluded == 3
    assert len(enum.paths) == 3


def test_string_endpoints_accepted(space, params):
    enum = enumerate_paths(space, params, "g,g,1", "e,e,0", order=3)
    assert len(enum.paths) == 6


def test_order_must_be_positive(space, params):
    with pytest.raises(ValueError, match="order"):
        enumerate_paths(space, params, "g,g,1", "e,e,0", order=0)


def test_path_sum_rejects_wrong_order(space, params):
    enum = enumerate_paths(space, params, "g,g,1", "g,e,0", order=1)
    assert len(enum.paths) == 1
    with pytest.raises(ValueError, match="three-step"):
        path_sum_coupling(enum, params)


def test_singular_intermediate_raises():
    """A rung resonant with the endpoints makes a denominator vanish."""
    p = SystemParams(
        omega_c=2.0, delta=-3.0, omega_fg=2.0, omega_ef=-1.0, omega_a=1.0,
        lambda_a=0.1, lambda_b=0.1, n_max=3,
    )
    space = HilbertSpace(3)
    enum = enumerate_paths(space, p, PHOTON_STATE, EXCITED_STATE, order=3)
    with pytest.raises(SingularPathError, match="denominator"):
        path_sum_coupling(enum, p)
    with pytest.raises(SingularPathError, match="diverges"):
        closed_form_coupling(p)


def test_closed_form_requires_symmetric_parameterization():
    asym = SystemParams.default(2.0, 0.4, lambda_a=0.12, lambda_b=0.08)
    with pytest.raises(ValueError, match="symmetric"):
        closed_form_coupling(asym)


def test_closed_form_rejects_anharmonicity_beyond_pole():
    p = SystemParams(
        omega_c=2.0, delta=-3.5, omega_fg=2.25, omega_ef=-1.25, omega_a=1.0,
        lambda_a=0.1, lambda_b=0.1, n_max=2,
    )
    with pytest.raises(ValueError, match="valid"):
        closed_form_coupling(p)


def test_path_sum_accepts_plain_path_list(space, params):
    enum = enumerate_paths(space, params, PHOTON_STATE, EXCITED_STATE, order=3)
    assert path_sum_coupling(list(enum.paths), params) == path_sum_coupling(
        enum, params
    )


def test_enumeration_is_deterministic(space, params):
    a = enumerate_paths(space, params, PHOTON_STATE, EXCITED_STATE, order=3)
    b = enumerate_paths(space, params, PHOTON_STATE, EXCITED_STATE, order=3)
    assert a == b
    assert isinstance(a, PathEnumeration)


def test_describe_renders_the_state_chain(space, params):
    enum = enumerate_paths(space, params, PHOTON_STATE, EXCITED_STATE, order=3)
    text = enum.paths[0].describe()
    assert text.startswith("|g,g,1>")
    assert text.endswith("|e,e,0>")
    assert " -> " in text
