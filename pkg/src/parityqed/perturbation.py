"""Third-order transition paths and the effective two-atom coupling.

The joint transition |g,g,1> -> |e,e,0> needs three interaction steps (two
qutrit rungs plus the qubit flip), each one absorbing or emitting a photon.
The effective coupling is the standard third-order sum over all such paths,

    coupling = | sum_paths  m1 m2 m3 / ((E_i - E_v1) (E_i - E_v2)) |

with bare energies taken at exact resonance omega_c = omega_a + omega_b,
where the endpoints are degenerate.  The closed form below is the same sum
evaluated analytically for the default symmetric parameterization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .hamiltonian import SystemParams, bare_energy
from .hilbert import BasisState, HilbertSpace

_DENOMINATOR_TOL = 1e-12

# (channel name, subsystem level pair it exchanges, flip amplitude)
_CHANNELS = (
    ("qutrit_ef", "qutrit", "e", "f", math.sqrt(2.0)),
    ("qutrit_fg", "qutrit", "f", "g", 1.0),
    ("qubit", "qubit", "e", "g", 1.0),
)


class SingularPathError(ArithmeticError):
    """An intermediate state is degenerate with the endpoints."""


@dataclass(frozen=True)
class TransitionPath:
    """One interaction path: visited states plus per-step data.

    ``step_amplitudes`` are the interaction matrix elements with the coupling
    strength divided out (e.g. sqrt(2) * sqrt(n+1) for an upper-rung flip
    with photon emission into Fock level n+1); ``channels`` records which
    coupling each step used so the full element can be reconstructed.
    ``energy_denominators`` hold E_initial - E_intermediate for the
    intermediate states, evaluated with bare energies at resonance.
    """

    states: tuple[BasisState, ...]
    channels: tuple[str, ...]
    step_amplitudes: tuple[float, ...]
    energy_denominators: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.states) - 1

    def describe(self) -> str:
        return " -> ".join(str(s) for s in self.states)


@dataclass(frozen=True)
class PathEnumeration:
    """Enumerated paths plus truncation diagnostics."""

    paths: tuple[TransitionPath, ...]
    truncation_excluded: int


def _moves(state: BasisState):
    """All single interaction steps out of a bare state (photon cap ignored)."""
    for name, system, up, down, amp in _CHANNELS:
        current = state.qutrit if system == "qutrit" else state.qubit
        if current == up:
            flipped = down
        elif current == down:
            flipped = up
        else:
            continue
        for dn in (-1, +1):
            n2 = state.photons + dn
            if n2 < 0:
                continue
            photon_amp = math.sqrt(state.photons) if dn < 0 else math.sqrt(n2)
            if system == "qutrit":
                nxt = BasisState(flipped, state.qubit, n2)
            else:
                nxt = BasisState(state.qutrit, flipped, n2)
            yield name, nxt, amp * photon_amp


def _qutrit_distance(a: str, b: str) -> int:
    order = {"g": 0, "f": 1, "e": 2}
    return abs(order[a] - order[b])


def enumerate_paths(
    space: HilbertSpace,
    params: SystemParams,
    initial: BasisState | str,
    final: BasisState | str,
    order: int = 3,
) -> PathEnumeration:
    """All interaction paths of the given length between two bare states.

    Paths whose intermediate photon number would exceed the space's n_max are
    not returned but counted in ``truncation_excluded``, so truncation
    artifacts stay visible.  Opposite-parity endpoints give an empty result
    (each step changes the excitation number by 0 or +-2).
    """
    if isinstance(initial, str):
        initial = BasisState.from_label(initial)
    if isinstance(final, str):
        final = BasisState.from_label(final)
    if order < 1:
        raise ValueError("order must be >= 1")

    e_init = bare_energy(initial, params.with_omega_c(params.omega_a + params.omega_b))
    resonant = params.with_omega_c(params.omega_a + params.omega_b)

    kept: list[TransitionPath] = []
    excluded = 0

    def walk(state: BasisState, steps_left: int, trail, channels, amps):
        nonlocal excluded
        if steps_left == 0:
            if state == final:
                over = max(s.photons for s in trail) > space.n_max
                if over:
                    excluded += 1
                else:
                    inner = trail[1:-1]
                    denominators = tuple(
                        e_init - bare_energy(s, resonant) for s in inner
                    )
                    kept.append(
                        TransitionPath(
                            states=tuple(trail),
                            channels=tuple(channels),
                            step_amplitudes=tuple(amps),
                            energy_denominators=denominators,
                        )
                    )
            return
        # Feasibility pruning: every step flips one atomic rung and moves one
        # photon, so remaining flips and photon distance bound the reachable set.
        flips_needed = _qutrit_distance(state.qutrit, final.qutrit) + (
            state.qubit != final.qubit
        )
        photon_dist = abs(state.photons - final.photons)
        if flips_needed > steps_left or photon_dist > steps_left:
            return
        if (final.photons - state.photons + steps_left) % 2 != 0:
            return
        for name, nxt, amp in _moves(state):
            walk(nxt, steps_left - 1, trail + [nxt], channels + [name], amps + [amp])

    walk(initial, order, [initial], [], [])

    kept.sort(key=lambda p: tuple(space.index_of(s) for s in p.states))
    return PathEnumeration(paths=tuple(kept), truncation_excluded=excluded)


def path_sum_coupling(
    paths, params: SystemParams
) -> float:
    """Effective coupling magnitude from a set of three-step paths."""
    if isinstance(paths, PathEnumeration):
        paths = paths.paths
    total = 0.0
    lam = {"qutrit_ef": params.lambda_a, "qutrit_fg": params.lambda_a, "qubit": params.lambda_b}
    for path in paths:
        if path.order != 3:
            raise ValueError("the path-sum formula applies to three-step paths")
        d1, d2 = path.energy_denominators
        if abs(d1) < _DENOMINATOR_TOL or abs(d2) < _DENOMINATOR_TOL:
            raise SingularPathError(
                f"vanishing energy denominator on path {path.describe()}"
            )
        element = 1.0
        for channel, amp in zip(path.channels, path.step_amplitudes):
            element *= lam[channel] * amp
        total += element / (d1 * d2)
    return abs(total)


def closed_form_coupling(params: SystemParams) -> float:
    """Analytic effective coupling, valid for the default symmetric setup.

    coupling = (16 sqrt(2) / 3) * delta * lambda^3
               / (omega_b * (9 omega_b^2 - delta^2)),

    returned as a magnitude.  Requires omega_a = omega_b,
    omega_fg = (omega_b - delta)/2 and lambda_a = lambda_b, and |delta| below
    3 omega_b where the expression has a pole.
    """
    if not (
        abs(params.omega_a - params.omega_b) <= _DENOMINATOR_TOL
        and abs(params.omega_fg - (params.omega_b - params.delta) / 2.0)
        <= _DENOMINATOR_TOL
        and abs(params.lambda_a - params.lambda_b) <= _DENOMINATOR_TOL
    ):
        raise ValueError(
            "closed form requires the default symmetric parameterization"
        )
    if abs(abs(params.delta) - 3.0 * params.omega_b) < 1e-9:
        raise SingularPathError("closed form diverges at delta = +-3 omega_b")
    if abs(params.delta) > 3.0 * params.omega_b:
        raise ValueError("closed form is only valid for |delta| < 3 omega_b")
    lam = params.lambda_a
    num = 16.0 * math.sqrt(2.0) / 3.0 * params.delta * lam**3
    den = params.omega_b * (9.0 * params.omega_b**2 - params.delta**2)
    return abs(num / den)
