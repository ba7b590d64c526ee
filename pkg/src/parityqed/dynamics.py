"""Open-system dynamics in the dressed basis.

Dissipation at zero temperature is modeled with jump operators between
eigenstates (|phi_n><phi_m| with E_m > E_n), one channel family per coupling
operator: the cavity quadrature, the two qutrit rungs and the qubit flip.
Each pair's rate is the bath rate times the squared dressed matrix element.

In the eigenbasis the coherent part is a pure phase rotation, so the master
equation is integrated in the interaction picture, where (for eigenstate
dyad jumps) the generator is exactly time independent: populations obey a
classical rate equation and every coherence decays independently.  The
rotated density matrix is reconstructed at the sample times only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .hilbert import BasisState
from .spectral import EigenSystem

RATE_FLOOR = 1e-16


@dataclass(frozen=True)
class DissipationRates:
    """Bath rates for the four decay channels (units of the qubit frequency)."""

    cavity: float
    qutrit_upper: float
    qutrit_lower: float
    qubit: float

    def __post_init__(self) -> None:
        for name in ("cavity", "qutrit_upper", "qutrit_lower", "qubit"):
            if getattr(self, name) < 0:
                raise ValueError(f"rate {name} must be >= 0")

    @classmethod
    def from_cavity_rate(cls, kappa: float) -> "DissipationRates":
        """Single-knob convention: atomic rates tied to the cavity rate, with
        the upper qutrit rung faster by sqrt(2)."""
        return cls(
            cavity=kappa,
            qutrit_upper=math.sqrt(2.0) * kappa,
            qutrit_lower=kappa,
            qubit=kappa,
        )

    @classmethod
    def closed(cls) -> "DissipationRates":
        return cls(0.0, 0.0, 0.0, 0.0)


@dataclass
class DensityMatrix:
    """Density matrix tagged with the basis it is written in."""

    matrix: np.ndarray
    basis: str  # "bare" or "dressed"

    def __post_init__(self) -> None:
        if self.basis not in ("bare", "dressed"):
            raise ValueError("basis must be 'bare' or 'dressed'")

    @classmethod
    def pure_bare(cls, space, state: BasisState | str) -> "DensityMatrix":
        vec = space.basis_vector(state)
        return cls(np.outer(vec, vec.conj()), "bare")

    def validate(
        self,
        herm_tol: float = 1e-10,
        trace_tol: float = 1e-8,
        positivity_tol: float = 1e-7,
    ) -> None:
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > herm_tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > trace_tol or abs(np.trace(m).imag) > trace_tol:
            raise ValueError("density matrix trace differs from 1")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0] < -positivity_tol:
            raise ValueError("density matrix has a significant negative eigenvalue")


def positive_frequency(eig: EigenSystem, bare_op: np.ndarray) -> np.ndarray:
    """Positive-frequency (energy-lowering) part of an operator, dressed basis.

    Entry (n, m) keeps <phi_n|op|phi_m> when E_m > E_n strictly and is zero
    otherwise.  With no coupling this reduces to the bare lowering operator.
    """
    dressed = eig.to_dressed(bare_op)
    lowering = eig.energies[None, :] - eig.energies[:, None] > 0.0
    return np.where(lowering, dressed, 0.0)


def _channel_operators(eig: EigenSystem) -> dict[str, np.ndarray]:
    """Bare coupling operators of the four decay channels."""
    space = eig.space
    return {
        "cavity": space.quadrature(),
        "qutrit_upper": space.qutrit_flip_ef(),
        "qutrit_lower": space.qutrit_flip_fg(),
        "qubit": space.qubit_flip(),
    }


@dataclass(frozen=True)
class JumpChannel:
    """One dressed-basis decay channel |phi_lower><phi_upper| with its rate."""

    name: str
    lower: int
    upper: int
    rate: float


@dataclass(frozen=True)
class JumpChannelSet:
    channels: tuple[JumpChannel, ...]
    cutoff: int
    rates: DissipationRates


def dressed_jump_channels(
    eig: EigenSystem, rates: DissipationRates, cutoff: int = 40
) -> JumpChannelSet:
    """All decay channels among the lowest ``cutoff`` eigenstates.

    Channels with rate below 1e-16 are dropped.  Restricting the pairs to a
    cutoff block keeps the generator small; population outside the block is
    conserved exactly and should be audited against the state being evolved
    (see EvolutionRecord.population_above_cutoff).
    """
    cutoff = min(cutoff, eig.dim)
    ops = _channel_operators(eig)
    channels: list[JumpChannel] = []
    for name in ("cavity", "qutrit_upper", "qutrit_lower", "qubit"):
        bath_rate = getattr(rates, name)
        if bath_rate <= 0.0:
            continue
        dressed = eig.to_dressed(ops[name])
        for m in range(cutoff):
            for n in range(m):
                if not eig.energies[m] - eig.energies[n] > 0.0:
                    continue
                rate = bath_rate * abs(dressed[n, m]) ** 2
                if rate >= RATE_FLOOR:
                    channels.append(JumpChannel(name, n, m, rate))
    return JumpChannelSet(tuple(channels), cutoff, rates)


@dataclass
class EvolutionRecord:
    """Sampled observables of one master-equation run (dressed-basis state).

    photon_number is the positive-frequency quadrature population <X^- X^+>
    (zero on the true ground state even with counter-rotating dressing);
    bare_photon_number is <a^dag a>.
    """

    times: np.ndarray
    photon_number: np.ndarray
    bare_photon_number: np.ndarray
    p_qutrit_excited: np.ndarray
    p_both_excited: np.ndarray
    flux: np.ndarray
    trace_error: np.ndarray
    min_eigenvalue: np.ndarray
    estimator: str
    population_above_cutoff: float
    rhs_evaluations: int
    final_state: DensityMatrix


def _estimator_ops(eig: EigenSystem, estimator: str) -> tuple[np.ndarray, np.ndarray]:
    """Dressed operators whose expectations give the two excitation estimates."""
    space = eig.space
    if estimator == "dressed":
        c1 = positive_frequency(eig, space.qutrit_flip_ef())
        c3 = positive_frequency(eig, space.qubit_flip())
        both = c3 @ c1
        return c1.conj().T @ c1, both.conj().T @ both
    if estimator == "bare":
        p_a = eig.to_dressed(space.qutrit_projector("e"))
        p_ab = eig.to_dressed(
            space.qutrit_projector("e") @ space.qubit_projector("e")
        )
        return p_a, p_ab
    raise ValueError("estimator must be 'dressed' or 'bare'")


def qubit_populations(
    eig: EigenSystem, rho: DensityMatrix, estimator: str = "dressed"
) -> tuple[float, float]:
    """(qutrit excited, both atoms excited) populations of one state.

    The default 'dressed' estimator uses the emission correlators built from
    positive-frequency flip operators; 'bare' uses plain level projectors.
    """
    rho_d = _to_dressed(eig, rho)
    op_a, op_ab = _estimator_ops(eig, estimator)
    return (
        float(np.einsum("ab,ba->", rho_d, op_a).real),
        float(np.einsum("ab,ba->", rho_d, op_ab).real),
    )


def output_flux(eig: EigenSystem, rho: DensityMatrix, rates: DissipationRates) -> float:
    """Emitted photon flux kappa * <X^- X^+>."""
    rho_d = _to_dressed(eig, rho)
    x_plus = positive_frequency(eig, eig.space.quadrature())
    n_plus = x_plus.conj().T @ x_plus
    return rates.cavity * float(np.einsum("ab,ba->", rho_d, n_plus).real)


def _to_dressed(eig: EigenSystem, rho: DensityMatrix) -> np.ndarray:
    if rho.matrix.shape != (eig.dim, eig.dim):
        raise ValueError("density matrix dimension does not match the spectrum")
    if rho.basis == "bare":
        return eig.states.conj().T @ rho.matrix @ eig.states
    return rho.matrix


def evolve(
    rho0: DensityMatrix,
    eig: EigenSystem,
    channels: JumpChannelSet,
    t_grid: np.ndarray,
    estimator: str = "dressed",
    rtol: float = 1e-9,
) -> EvolutionRecord:
    """Integrate the dressed-basis master equation and sample observables.

    ``t_grid`` must start at 0 and increase.  The interaction-picture state is
    advanced with an adaptive high-order explicit integrator; the trace is a
    linear invariant of the generator, so it is conserved to rounding.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2:
        raise ValueError("t_grid must be a 1-D array with at least two samples")
    if t_grid[0] != 0.0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must start at 0 and increase strictly")

    rho0.validate()
    sigma0 = _to_dressed(eig, rho0)
    dim = eig.dim

    gain = np.zeros((dim, dim))
    loss = np.zeros(dim)
    for ch in channels.channels:
        gain[ch.lower, ch.upper] += ch.rate
        loss[ch.upper] += ch.rate
    decay = 0.5 * (loss[:, None] + loss[None, :])

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        sigma = y.reshape(dim, dim)
        d_sigma = -decay * sigma
        d_sigma[np.diag_indices(dim)] += gain @ np.real(np.diagonal(sigma))
        return d_sigma.reshape(-1)

    sol = solve_ivp(
        rhs,
        (0.0, float(t_grid[-1])),
        sigma0.reshape(-1).astype(complex),
        method="DOP853",
        rtol=rtol,
        atol=1e-13,
        t_eval=t_grid,
        dense_output=False,
    )
    if not sol.success:
        raise RuntimeError(f"integration failed: {sol.message}")

    space = eig.space
    x_plus = positive_frequency(eig, space.quadrature())
    n_plus = x_plus.conj().T @ x_plus
    n_bare = eig.to_dressed(space.number())
    op_a, op_ab = _estimator_ops(eig, estimator)

    n_t = len(t_grid)
    out = {
        "photon_number": np.empty(n_t),
        "bare_photon_number": np.empty(n_t),
        "p_qutrit_excited": np.empty(n_t),
        "p_both_excited": np.empty(n_t),
        "trace_error": np.empty(n_t),
        "min_eigenvalue": np.empty(n_t),
    }
    rho_t = None
    for k, t in enumerate(t_grid):
        sigma = sol.y[:, k].reshape(dim, dim)
        phase = np.exp(-1j * eig.energies * t)
        rho_t = (phase[:, None] * sigma) * phase.conj()[None, :]
        out["photon_number"][k] = np.einsum("ab,ba->", rho_t, n_plus).real
        out["bare_photon_number"][k] = np.einsum("ab,ba->", rho_t, n_bare).real
        out["p_qutrit_excited"][k] = np.einsum("ab,ba->", rho_t, op_a).real
        out["p_both_excited"][k] = np.einsum("ab,ba->", rho_t, op_ab).real
        out["trace_error"][k] = abs(np.trace(rho_t) - 1.0)
        out["min_eigenvalue"][k] = np.linalg.eigvalsh(
            0.5 * (rho_t + rho_t.conj().T)
        )[0]

    tail = float(np.sum(np.real(np.diagonal(sigma0))[channels.cutoff :]))
    return EvolutionRecord(
        times=t_grid,
        photon_number=out["photon_number"],
        bare_photon_number=out["bare_photon_number"],
        p_qutrit_excited=out["p_qutrit_excited"],
        p_both_excited=out["p_both_excited"],
        flux=channels.rates.cavity * out["photon_number"],
        trace_error=out["trace_error"],
        min_eigenvalue=out["min_eigenvalue"],
        estimator=estimator,
        population_above_cutoff=tail,
        rhs_evaluations=int(sol.nfev),
        final_state=DensityMatrix(rho_t, "dressed"),
    )


def max_difference(record: EvolutionRecord, t_max: float | None = None) -> float:
    """Largest signed excess of the joint-excitation estimate over <X^- X^+>."""
    diff = record.p_both_excited - record.photon_number
    if t_max is not None:
        mask = record.times <= t_max
        if not np.any(mask):
            raise ValueError("t_max excludes every sample")
        diff = diff[mask]
    return float(np.max(diff))
