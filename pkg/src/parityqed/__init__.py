"""Parity-conserving cavity QED: one photon exciting two atoms at once.

A qutrit ladder (g-f-e), a qubit and a single cavity mode are coupled through
the field quadrature with all counter-rotating terms kept.  The conserved
chain parity lets |g,g,1> and |e,e,0> hybridize through a third-order
process; this package computes the resulting avoided crossing, the effective
coupling (numerically, by path summation and in closed form), hybrid-state
fidelities, and the dissipative dynamics in the dressed basis.
"""

from ._version import __version__
from .config import ExperimentConfig, config_from_dict, load_config
from .dynamics import (
    DensityMatrix,
    DissipationRates,
    EvolutionRecord,
    JumpChannel,
    JumpChannelSet,
    dressed_jump_channels,
    evolve,
    max_difference,
    output_flux,
    positive_frequency,
    qubit_populations,
)
from .hamiltonian import (
    SystemParams,
    bare_energy,
    build_h0,
    build_interaction,
    build_total,
)
from .hilbert import BasisState, HilbertSpace
from .perturbation import (
    PathEnumeration,
    SingularPathError,
    TransitionPath,
    closed_form_coupling,
    enumerate_paths,
    path_sum_coupling,
)
from .results import ResultTable
from .experiments import ConvergenceError, run_experiment
from .spectral import (
    CrossingNotFoundError,
    CrossingResult,
    EigenSystem,
    EXCITED_STATE,
    HybridFidelities,
    PHOTON_STATE,
    diagonalize,
    eigensystem,
    find_avoided_crossing,
    hybrid_fidelities,
    level_curve,
)

__all__ = [
    "__version__",
    "BasisState",
    "HilbertSpace",
    "SystemParams",
    "bare_energy",
    "build_h0",
    "build_interaction",
    "build_total",
    "diagonalize",
    "eigensystem",
    "EigenSystem",
    "level_curve",
    "find_avoided_crossing",
    "CrossingResult",
    "CrossingNotFoundError",
    "hybrid_fidelities",
    "HybridFidelities",
    "PHOTON_STATE",
    "EXCITED_STATE",
    "TransitionPath",
    "PathEnumeration",
    "SingularPathError",
    "enumerate_paths",
    "path_sum_coupling",
    "closed_form_coupling",
    "DensityMatrix",
    "DissipationRates",
    "JumpChannel",
    "JumpChannelSet",
    "EvolutionRecord",
    "positive_frequency",
    "dressed_jump_channels",
    "evolve",
    "qubit_populations",
    "output_flux",
    "max_difference",
    "ExperimentConfig",
    "config_from_dict",
    "load_config",
    "ResultTable",
    "run_experiment",
    "ConvergenceError",
]
