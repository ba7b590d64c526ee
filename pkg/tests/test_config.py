"""Config schema: defaults, per-experiment overrides, validation, file I/O."""

from __future__ import annotations

import json

import pytest

from parityqed import ExperimentConfig, config_from_dict, load_config


def test_base_defaults():
    cfg = ExperimentConfig(experiment="crossing")
    assert cfg.delta == 0.4
    assert cfg.lambda_a == cfg.lambda_b == 0.1
    assert cfg.n_max == 10
    assert cfg.bracket == (1.9, 2.1)
    assert cfg.cutoff == 40
    assert cfg.estimator == "dressed"
    assert cfg.kappa == 0.0


def test_lambda_shorthand_sets_both_couplings():
    cfg = config_from_dict({"experiment": "crossing", "lambda": 0.17})
    assert cfg.lambda_a == cfg.lambda_b == 0.17


def test_experiment_specific_defaults():
    sweep = config_from_dict({"experiment": "max_difference_sweep"})
    assert sweep.kappa == 1e-5
    assert sweep.samples == 1024
    assert sweep.bracket == (1.7, 2.3)
    fid = config_from_dict({"experiment": "fidelity_vs_lambda"})
    assert fid.bracket == (1.7, 2.3)
    cmap = config_from_dict({"experiment": "coupling_map"})
    assert cmap.bracket == (1.7, 2.3)
    # user values win over the per-experiment layer
    custom = config_from_dict({"experiment": "coupling_map", "bracket": [1.8, 2.2]})
    assert custom.bracket == (1.8, 2.2)


def test_unknown_experiment_rejected():
    with pytest.raises(ValueError, match="unknown experiment"):
        ExperimentConfig(experiment="resonance_hunt")


def test_unknown_key_rejected():
    with pytest.raises(ValueError, match="unknown config key"):
        config_from_dict({"experiment": "crossing", "lamda": 0.1})


def test_missing_experiment_rejected():
    with pytest.raises(ValueError, match="experiment"):
        config_from_dict({"delta": 0.4})


@pytest.mark.parametrize(
    "overrides,match",
    [
        ({"delta": 1.0}, "delta"),
        ({"lambda_a": -0.1}, "coupling"),
        ({"omega_c": 0.0}, "omega_c"),
        ({"n_max": 0}, "n_max"),
        ({"kappa": -1e-6}, "kappa"),
        ({"bracket": (2.1, 1.9)}, "bracket"),
        ({"lambda_grid": (0.2, 0.1, 5)}, "start"),
        ({"lambda_grid": (0.1, 0.2, 1)}, "points"),
        ({"delta_values": ()}, "delta_values"),
        ({"samples": 1}, "samples"),
        ({"periods": 0.0}, "periods"),
        ({"cutoff": 1}, "cutoff"),
        ({"estimator": "projective"}, "estimator"),
        ({"order": 0}, "order"),
        ({"threads": 0}, "threads"),
        ({"gamma_qubit": -1.0}, "gamma_qubit"),
    ],
)
def test_field_validation(overrides, match):
    doc = {"experiment": "time_evolution"}
    doc.update(overrides)
    with pytest.raises(ValueError, match=match):
        config_from_dict(doc)


def test_paths_experiment_pins_the_order():
    with pytest.raises(ValueError, match="three-step"):
        config_from_dict({"experiment": "paths", "order": 5})


def test_grids_are_coerced_to_typed_tuples():
    cfg = config_from_dict(
        {"experiment": "spectrum_sweep", "omega_c_grid": ["1.95", "2.05", "11"]}
    )
    assert cfg.omega_c_grid == (1.95, 2.05, 11)
    assert isinstance(cfg.omega_c_grid[2], int)


def test_override_returns_new_config():
    cfg = ExperimentConfig(experiment="crossing")
    other = cfg.override(delta=0.2)
    assert other.delta == 0.2
    assert cfg.delta == 0.4


def test_resolved_echo_contains_every_field():
    cfg = ExperimentConfig(experiment="crossing")
    echo = cfg.resolved()
    assert echo["experiment"] == "crossing"
    assert set(echo) == set(ExperimentConfig.__dataclass_fields__)


def test_resolve_threads_priority(monkeypatch):
    monkeypatch.delenv("SIM_THREADS", raising=False)
    assert ExperimentConfig(experiment="crossing", threads=3).resolve_threads() == 3
    monkeypatch.setenv("SIM_THREADS", "5")
    assert ExperimentConfig(experiment="crossing", threads=3).resolve_threads() == 3
    assert ExperimentConfig(experiment="crossing").resolve_threads() == 5
    monkeypatch.setenv("SIM_THREADS", "zero")
    with pytest.raises(ValueError, match="SIM_THREADS"):
        ExperimentConfig(experiment="crossing").resolve_threads()
    monkeypatch.delenv("SIM_THREADS")
    assert ExperimentConfig(experiment="crossing").resolve_threads() >= 1


def test_load_config_reads_file_and_applies_overrides(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"experiment": "crossing", "delta": 0.3}))
    cfg = load_config(str(path), "crossing", {"n_max": 6})
    assert cfg.delta == 0.3
    assert cfg.n_max == 6


def test_load_config_rejects_experiment_mismatch(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"experiment": "paths"}))
    with pytest.raises(ValueError, match="paths"):
        load_config(str(path), "crossing")


def test_load_config_rejects_non_object_document(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps([1, 2, 3]))
    with pytest.raises(ValueError, match="JSON object"):
        load_config(str(path), "crossing")


def test_load_config_without_file_uses_defaults():
    cfg = load_config(None, "audit")
    assert cfg.experiment == "audit"
    assert cfg.audit_step == 4
