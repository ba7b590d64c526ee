from __future__ import annotations

import pytest

from parityqed import (
    HilbertSpace,
    SystemParams,
    eigensystem,
    find_avoided_crossing,
)


@pytest.fixture(scope="session")
def space10():
    return HilbertSpace(10)


@pytest.fixture(scope="session")
def reference_params():
    """Central parameter point: delta = 0.4, lambda = 0.1, n_max = 10."""
    return SystemParams.default(2.0, 0.4, 0.1)


@pytest.fixture(scope="session")
def reference_crossing(space10, reference_params):
    return find_avoided_crossing(space10, reference_params, (1.9, 2.1))


@pytest.fixture(scope="session")
def crossing_eigensystem(space10, reference_params, reference_crossing):
    params = reference_params.with_omega_c(reference_crossing.omega_c_star)
    return eigensystem(space10, params)
