"""System parameters and Hamiltonian assembly.

The model couples a three-level ladder system (qutrit A, levels g/f/e), a
two-level system (qubit B) and one cavity mode.  In units of the qubit
frequency the bare part is

    H0 = omega_c a^dag a + omega_a |e><e|_A + omega_fg |f><f|_A + omega_b |e><e|_B

and the interaction part couples the field quadrature to every allowed
single-step atomic transition without any rotating-wave approximation:

    HI = lambda_a (a + a^dag) (sqrt(2) (|e><f|_A + h.c.) + (|f><g|_A + h.c.))
       + lambda_b (a + a^dag) (|e><g|_B + h.c.)

The direct g<->e qutrit transition is absent (forbidden), which is what makes
the joint excitation of both atoms by one photon a third-order process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import HilbertSpace

_CONSISTENCY_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Immutable model parameters, all in units of the qubit frequency.

    The two derived sums are stored explicitly and validated:
    omega_ef = omega_fg + delta and omega_a = omega_fg + omega_ef, so the
    qutrit's two rungs always add up to its full transition frequency.
    """

    omega_c: float
    delta: float
    omega_fg: float
    omega_ef: float
    omega_a: float
    lambda_a: float
    lambda_b: float
    n_max: int
    omega_b: float = 1.0

    def __post_init__(self) -> None:
        if self.omega_c <= 0:
            raise ValueError("omega_c must be positive")
        if self.omega_b <= 0:
            raise ValueError("omega_b must be positive")
        if self.lambda_a < 0 or self.lambda_b < 0:
            raise ValueError("coupling strengths must be >= 0")
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")
        if abs(self.omega_ef - (self.omega_fg + self.delta)) > _CONSISTENCY_TOL:
            raise ValueError("omega_ef must equal omega_fg + delta")
        if abs(self.omega_a - (self.omega_fg + self.omega_ef)) > _CONSISTENCY_TOL:
            raise ValueError("omega_a must equal omega_fg + omega_ef")

    @classmethod
    def default(
        cls,
        omega_c: float,
        delta: float,
        coupling: float | None = None,
        *,
        lambda_a: float | None = None,
        lambda_b: float | None = None,
        n_max: int = 10,
        omega_b: float = 1.0,
    ) -> "SystemParams":
        """Default parameterization: both atoms resonant (omega_a = omega_b).

        The qutrit rungs are omega_fg = (omega_b - delta)/2 and
        omega_ef = omega_fg + delta, which forces |delta| < omega_b so both
        rungs stay positive.  ``coupling`` sets lambda_a = lambda_b; pass the
        individual values instead for an asymmetric pair.
        """
        if abs(delta) >= omega_b:
            raise ValueError("default parameterization requires |delta| < omega_b")
        if coupling is not None:
            if lambda_a is not None or lambda_b is not None:
                raise ValueError("pass either coupling or lambda_a/lambda_b")
            lambda_a = lambda_b = coupling
        if lambda_a is None or lambda_b is None:
            raise ValueError("coupling strengths missing")
        omega_fg = (omega_b - delta) / 2.0
        omega_ef = omega_fg + delta
        return cls(
            omega_c=omega_c,
            delta=delta,
            omega_fg=omega_fg,
            omega_ef=omega_ef,
            omega_a=omega_fg + omega_ef,
            lambda_a=lambda_a,
            lambda_b=lambda_b,
            n_max=n_max,
            omega_b=omega_b,
        )

    def is_default_symmetric(self, tol: float = _CONSISTENCY_TOL) -> bool:
        """True when this is the default parameterization with lambda_a = lambda_b."""
        return (
            abs(self.omega_a - self.omega_b) <= tol
            and abs(self.omega_fg - (self.omega_b - self.delta) / 2.0) <= tol
            and abs(self.lambda_a - self.lambda_b) <= tol
        )

    def with_omega_c(self, omega_c: float) -> "SystemParams":
        import dataclasses

        return dataclasses.replace(self, omega_c=omega_c)

    def space(self) -> HilbertSpace:
        return HilbertSpace(self.n_max)


def bare_energy(state, params: SystemParams) -> float:
    """Diagonal H0 energy of one basis state."""
    energy = params.omega_c * state.photons
    if state.qutrit == "e":
        energy += params.omega_a
    elif state.qutrit == "f":
        energy += params.omega_fg
    if state.qubit == "e":
        energy += params.omega_b
    return energy


def build_h0(space: HilbertSpace, params: SystemParams) -> np.ndarray:
    """Diagonal bare Hamiltonian."""
    if space.n_max != params.n_max:
        raise ValueError("space and params disagree on n_max")
    diag = np.array([bare_energy(s, params) for s in space.states], dtype=complex)
    return np.diag(diag)


def build_interaction(space: HilbertSpace, params: SystemParams) -> np.ndarray:
    """Quadrature-coupled interaction, counter-rotating terms included."""
    if space.n_max != params.n_max:
        raise ValueError("space and params disagree on n_max")
    x = space.quadrature()
    qutrit_part = math.sqrt(2.0) * space.qutrit_flip_ef() + space.qutrit_flip_fg()
    qubit_part = space.qubit_flip()
    return params.lambda_a * x @ qutrit_part + params.lambda_b * x @ qubit_part


def build_total(space: HilbertSpace, params: SystemParams) -> np.ndarray:
    """Full Hamiltonian H0 + HI."""
    return build_h0(space, params) + build_interaction(space, params)
