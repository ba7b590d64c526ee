"""Truncated product Hilbert space: qutrit (A), qubit (B), single cavity mode.

Basis states are |qutrit, qubit, photons> with qutrit levels g < f < e and
qubit levels g < e.  The basis order is lexicographic in
(photons, qutrit_level, qubit_level), so the index of a state is

    index = 6 * photons + 2 * qutrit_index + qubit_index

and the total dimension is 6 * (n_max + 1).

All operators are returned as dense complex matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

QUTRIT_LEVELS = ("g", "f", "e")
QUBIT_LEVELS = ("g", "e")

# Excitation weight of each atomic level: the qutrit's top level counts twice
# because it sits two ladder steps above the ground state.
_QUTRIT_WEIGHT = {"g": 0, "f": 1, "e": 2}
_QUBIT_WEIGHT = {"g": 0, "e": 1}


@dataclass(frozen=True)
class BasisState:
    """One bare product state |qutrit, qubit, photons>."""

    qutrit: str
    qubit: str
    photons: int

    def __post_init__(self) -> None:
        if self.qutrit not in QUTRIT_LEVELS:
            raise ValueError(f"unknown qutrit level {self.qutrit!r}")
        if self.qubit not in QUBIT_LEVELS:
            raise ValueError(f"unknown qubit level {self.qubit!r}")
        if self.photons < 0:
            raise ValueError("photon number must be >= 0")

    @property
    def excitation_number(self) -> int:
        """Total excitation count N = photons + 2[qutrit=e] + [qutrit=f] + [qubit=e]."""
        return (
            self.photons
            + _QUTRIT_WEIGHT[self.qutrit]
            + _QUBIT_WEIGHT[self.qubit]
        )

    @property
    def parity(self) -> int:
        """Chain parity (-1)**N; states with even/odd N never mix."""
        return -1 if self.excitation_number % 2 else 1

    @property
    def label(self) -> str:
        return f"{self.qutrit},{self.qubit},{self.photons}"

    @classmethod
    def from_label(cls, label: str) -> "BasisState":
        qutrit, qubit, photons = label.split(",")
        return cls(qutrit, qubit, int(photons))

    def __str__(self) -> str:
        return f"|{self.label}>"


class HilbertSpace:
    """Product space of the qutrit, the qubit and a Fock space cut at n_max."""

    def __init__(self, n_max: int):
        if n_max < 0:
            raise ValueError("n_max must be >= 0")
        self.n_max = n_max
        self.states: list[BasisState] = [
            BasisState(qutrit, qubit, n)
            for n in range(n_max + 1)
            for qutrit in QUTRIT_LEVELS
            for qubit in QUBIT_LEVELS
        ]
        self.index: dict[BasisState, int] = {
            state: i for i, state in enumerate(self.states)
        }
        self.dim = len(self.states)

    def index_of(self, state: BasisState | str) -> int:
        if isinstance(state, str):
            state = BasisState.from_label(state)
        return self.index[state]

    def basis_vector(self, state: BasisState | str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        vec[self.index_of(state)] = 1.0
        return vec

    # ---- cavity operators -------------------------------------------------

    def annihilation(self) -> np.ndarray:
        """Photon annihilation operator a."""
        op = np.zeros((self.dim, self.dim), dtype=complex)
        for col, s in enumerate(self.states):
            if s.photons >= 1:
                t = BasisState(s.qutrit, s.qubit, s.photons - 1)
                op[self.index[t], col] = np.sqrt(s.photons)
        return op

    def number(self) -> np.ndarray:
        """Photon number operator a^dag a."""
        return np.diag(np.array([s.photons for s in self.states], dtype=complex))

    def quadrature(self) -> np.ndarray:
        """Field quadrature a + a^dag."""
        a = self.annihilation()
        return a + a.conj().T

    # ---- atomic operators -------------------------------------------------

    def _atomic_transfer(self, system: str, upper: str, lower: str) -> np.ndarray:
        """|lower><upper| on the chosen subsystem (a lowering operator)."""
        op = np.zeros((self.dim, self.dim), dtype=complex)
        for col, s in enumerate(self.states):
            if system == "qutrit" and s.qutrit == upper:
                t = BasisState(lower, s.qubit, s.photons)
            elif system == "qubit" and s.qubit == upper:
                t = BasisState(s.qutrit, lower, s.photons)
            else:
                continue
            op[self.index[t], col] = 1.0
        return op

    def qutrit_lower_ef(self) -> np.ndarray:
        """|f><e| on the qutrit (upper-rung lowering)."""
        return self._atomic_transfer("qutrit", "e", "f")

    def qutrit_lower_fg(self) -> np.ndarray:
        """|g><f| on the qutrit (lower-rung lowering)."""
        return self._atomic_transfer("qutrit", "f", "g")

    def qubit_lower(self) -> np.ndarray:
        """|g><e| on the qubit."""
        return self._atomic_transfer("qubit", "e", "g")

    def qutrit_flip_ef(self) -> np.ndarray:
        """|e><f| + |f><e| on the qutrit."""
        low = self.qutrit_lower_ef()
        return low + low.conj().T

    def qutrit_flip_fg(self) -> np.ndarray:
        """|f><g| + |g><f| on the qutrit."""
        low = self.qutrit_lower_fg()
        return low + low.conj().T

    def qubit_flip(self) -> np.ndarray:
        """|e><g| + |g><e| on the qubit."""
        low = self.qubit_lower()
        return low + low.conj().T

    def qutrit_projector(self, level: str) -> np.ndarray:
        diag = [1.0 if s.qutrit == level else 0.0 for s in self.states]
        return np.diag(np.array(diag, dtype=complex))

    def qubit_projector(self, level: str) -> np.ndarray:
        diag = [1.0 if s.qubit == level else 0.0 for s in self.states]
        return np.diag(np.array(diag, dtype=complex))

    # ---- conserved parity -------------------------------------------------

    def excitation_numbers(self) -> np.ndarray:
        return np.array([s.excitation_number for s in self.states], dtype=int)

    def parity_operator(self) -> np.ndarray:
        """Diagonal parity operator with entries (-1)**N per basis state.

        Every interaction term moves the excitation number N by 0 or +-2, so
        this operator commutes with the full Hamiltonian exactly and splits
        the space into an even and an odd chain.
        """
        return np.diag((-1.0 + 0j) ** self.excitation_numbers())

    def parity_indices(self) -> tuple[np.ndarray, np.ndarray]:
        """Index arrays of the even and the odd chain, in basis order."""
        n = self.excitation_numbers()
        even = np.nonzero(n % 2 == 0)[0]
        odd = np.nonzero(n % 2 == 1)[0]
        return even, odd
