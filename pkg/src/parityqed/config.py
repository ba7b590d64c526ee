"""Experiment configuration: JSON in, validated dataclass out.

Every field is optional in the JSON document; defaults reproduce the
reference setup (delta = 0.4, lambda = 0.1, resonant atoms, n_max = 10).
The key "lambda" sets both coupling strengths at once.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, replace

EXPERIMENTS = (
    "spectrum_sweep",
    "fidelity_vs_delta",
    "fidelity_vs_lambda",
    "time_evolution",
    "max_difference_sweep",
    "coupling_map",
    "paths",
    "crossing",
    "audit",
)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    delta: float = 0.4
    lambda_a: float = 0.1
    lambda_b: float = 0.1
    omega_c: float = 2.0
    n_max: int = 10
    kappa: float = 0.0
    gamma_qutrit_upper: float | None = None  # default sqrt(2) * kappa
    gamma_qutrit_lower: float | None = None  # default kappa
    gamma_qubit: float | None = None  # default kappa
    bracket: tuple[float, float] = (1.9, 2.1)
    omega_c_grid: tuple[float, float, int] = (1.9, 2.1, 201)
    delta_grid: tuple[float, float, int] = (0.05, 0.95, 46)
    lambda_grid: tuple[float, float, int] = (0.02, 0.25, 47)
    map_lambda_grid: tuple[float, float, int] = (0.01, 0.2, 20)
    map_delta_grid: tuple[float, float, int] = (-0.9, 0.9, 19)
    delta_values: tuple[float, ...] = (0.0, -0.4, 0.4)
    samples: int = 2048
    periods: float = 3.0
    cutoff: int = 40
    estimator: str = "dressed"
    order: int = 3
    audit_step: int = 4
    threads: int | None = None

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ValueError(
                f"unknown experiment {self.experiment!r}; pick one of {EXPERIMENTS}"
            )
        if not -1.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (-1, 1)")
        if self.lambda_a < 0 or self.lambda_b < 0:
            raise ValueError("coupling strengths must be >= 0")
        if self.omega_c <= 0:
            raise ValueError("omega_c must be positive")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.kappa < 0:
            raise ValueError("kappa must be >= 0")
        for name in ("gamma_qutrit_upper", "gamma_qutrit_lower", "gamma_qubit"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be >= 0")
        if not self.bracket[0] < self.bracket[1]:
            raise ValueError("bracket must satisfy lo < hi")
        for name in ("omega_c_grid", "delta_grid", "lambda_grid",
                     "map_lambda_grid", "map_delta_grid"):
            lo, hi, count = getattr(self, name)
            if not lo < hi:
                raise ValueError(f"{name}: start must be below stop")
            if count < 2:
                raise ValueError(f"{name}: need at least 2 points")
        if len(self.delta_values) < 1:
            raise ValueError("delta_values must not be empty")
        if self.samples < 2:
            raise ValueError("samples must be >= 2")
        if self.periods <= 0:
            raise ValueError("periods must be positive")
        if self.cutoff < 2:
            raise ValueError("cutoff must be >= 2")
        if self.estimator not in ("dressed", "bare"):
            raise ValueError("estimator must be 'dressed' or 'bare'")
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if self.audit_step < 1:
            raise ValueError("audit_step must be >= 1")
        if self.threads is not None and self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.experiment == "paths" and self.order != 3:
            raise ValueError("the paths experiment tabulates three-step paths")

    def resolved(self) -> dict:
        """Plain dict with every default filled in, for the metadata echo."""
        return asdict(self)

    def resolve_threads(self) -> int:
        if self.threads is not None:
            return self.threads
        env = os.environ.get("SIM_THREADS")
        if env:
            try:
                n = int(env)
            except ValueError as exc:
                raise ValueError("SIM_THREADS must be an integer") from exc
            if n < 1:
                raise ValueError("SIM_THREADS must be >= 1")
            return n
        return os.cpu_count() or 1

    def override(self, **kwargs) -> "ExperimentConfig":
        return replace(self, **kwargs)


# Per-experiment defaults applied between the base defaults and user values.
_EXPERIMENT_DEFAULTS: dict[str, dict] = {
    # The crossing drifts below omega_c = 1.9 once the coupling passes ~0.19,
    # so sweeps that reach lambda = 0.25 search a wider window.
    "fidelity_vs_lambda": {"bracket": (1.7, 2.3)},
    "max_difference_sweep": {"kappa": 1e-5, "samples": 1024, "bracket": (1.7, 2.3)},
    "coupling_map": {"bracket": (1.7, 2.3)},
}

_TUPLE_KEYS = (
    "bracket",
    "omega_c_grid",
    "delta_grid",
    "lambda_grid",
    "map_lambda_grid",
    "map_delta_grid",
    "delta_values",
)


def config_from_dict(doc: dict) -> ExperimentConfig:
    doc = dict(doc)
    experiment = doc.pop("experiment", None)
    if experiment is None:
        raise ValueError("config needs an 'experiment' key (or CLI subcommand)")
    values: dict = dict(_EXPERIMENT_DEFAULTS.get(experiment, {}))
    if "lambda" in doc:
        lam = doc.pop("lambda")
        values["lambda_a"] = lam
        values["lambda_b"] = lam
    known = set(ExperimentConfig.__dataclass_fields__) - {"experiment"}
    for key, value in doc.items():
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = value
    for key in _TUPLE_KEYS:
        if key in values and values[key] is not None:
            values[key] = tuple(values[key])
    if "omega_c_grid" in values:
        g = values["omega_c_grid"]
        values["omega_c_grid"] = (float(g[0]), float(g[1]), int(g[2]))
    for key in ("delta_grid", "lambda_grid", "map_lambda_grid", "map_delta_grid"):
        if key in values:
            g = values[key]
            values[key] = (float(g[0]), float(g[1]), int(g[2]))
    return ExperimentConfig(experiment=experiment, **values)


def load_config(path: str | None, experiment: str, overrides: dict | None = None) -> ExperimentConfig:
    """Read a JSON config file, apply CLI overrides, return the config."""
    doc: dict = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict):
            raise ValueError("config file must hold a JSON object")
    file_experiment = doc.get("experiment")
    if file_experiment is not None and file_experiment != experiment:
        raise ValueError(
            f"config file is for experiment {file_experiment!r}, not {experiment!r}"
        )
    doc["experiment"] = experiment
    if overrides:
        doc.update(overrides)
    return config_from_dict(doc)
