"""Experiment runners: parameter sweeps and single runs producing ResultTables.

Every runner resolves its configuration completely, echoes it into the table
metadata and records named invariant diagnostics; a table whose diagnostics
carry ok=False maps to a nonzero CLI exit code.  Sweep points are independent,
so they may be evaluated by a thread pool; results are collected in grid
order, which keeps the output deterministic.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict

import numpy as np

from ._version import __version__
from .config import ExperimentConfig
from .dynamics import (
    DensityMatrix,
    DissipationRates,
    dressed_jump_channels,
    evolve,
    max_difference,
)
from .hamiltonian import SystemParams
from .hilbert import HilbertSpace
from .perturbation import closed_form_coupling, enumerate_paths, path_sum_coupling
from .results import ResultTable
from .spectral import (
    PHOTON_STATE,
    EXCITED_STATE,
    CrossingNotFoundError,
    eigensystem,
    find_avoided_crossing,
    hybrid_fidelities,
)

TRACE_TOL = 1e-8
POSITIVITY_TOL = 1e-7
CUTOFF_AUDIT_TOL = 1e-6
ENERGY_DRIFT_TOL = 1e-6
GAP_FLOOR = 1e-9


class ConvergenceError(RuntimeError):
    """Truncation audit failed; carries the audit table for inspection."""

    def __init__(self, message: str, table: ResultTable):
        super().__init__(message)
        self.table = table


def _parallel_map(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _default_params(cfg: ExperimentConfig, **overrides) -> SystemParams:
    kwargs = {
        "omega_c": cfg.omega_c,
        "delta": cfg.delta,
        "lambda_a": cfg.lambda_a,
        "lambda_b": cfg.lambda_b,
        "n_max": cfg.n_max,
    }
    kwargs.update(overrides)
    return SystemParams.default(
        kwargs["omega_c"],
        kwargs["delta"],
        lambda_a=kwargs["lambda_a"],
        lambda_b=kwargs["lambda_b"],
        n_max=kwargs["n_max"],
    )


def rates_from_config(cfg: ExperimentConfig) -> DissipationRates:
    base = DissipationRates.from_cavity_rate(cfg.kappa)
    return DissipationRates(
        cavity=cfg.kappa,
        qutrit_upper=(
            base.qutrit_upper
            if cfg.gamma_qutrit_upper is None
            else cfg.gamma_qutrit_upper
        ),
        qutrit_lower=(
            base.qutrit_lower
            if cfg.gamma_qutrit_lower is None
            else cfg.gamma_qutrit_lower
        ),
        qubit=base.qubit if cfg.gamma_qubit is None else cfg.gamma_qubit,
    )


def _grid(spec: tuple[float, float, int]) -> np.ndarray:
    lo, hi, count = spec
    return np.linspace(lo, hi, count)


def _metadata(cfg: ExperimentConfig, checks: dict, values: dict, **extra) -> dict:
    meta = {
        "experiment": cfg.experiment,
        "config": cfg.resolved(),
        "version": __version__,
        "diagnostics": {
            "checks": checks,
            "values": values,
            "ok": all(bool(v) for v in checks.values()),
        },
    }
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# spectrum sweep and single crossing


def run_spectrum_sweep(cfg: ExperimentConfig) -> ResultTable:
    space = HilbertSpace(cfg.n_max)
    grid = _grid(cfg.omega_c_grid)
    mid = eigensystem(space, _default_params(cfg, omega_c=0.5 * (grid[0] + grid[-1])))
    photon = space.index_of(PHOTON_STATE)
    excited = space.index_of(EXCITED_STATE)
    weight = np.abs(mid.states[photon, :]) ** 2 + np.abs(mid.states[excited, :]) ** 2
    j = int(np.argmax(weight[:-1] + weight[1:]))

    def point(omega_c: float):
        eig = eigensystem(space, _default_params(cfg, omega_c=omega_c))
        lower, upper = eig.energies[j], eig.energies[j + 1]
        return float(omega_c), float(lower), float(upper), float(upper - lower)

    data = _parallel_map(point, grid, cfg.resolve_threads())
    gaps = np.array([row[3] for row in data])
    k_min = int(np.argmin(gaps))
    rows = [row + (i == k_min,) for i, row in enumerate(data)]

    crossing_meta: dict | None = None
    checks = {"crossing_found": True}
    try:
        crossing = find_avoided_crossing(
            space, _default_params(cfg), (float(grid[0]), float(grid[-1])),
            level_pair=(j, j + 1),
        )
        crossing_meta = asdict(crossing)
    except CrossingNotFoundError:
        checks["crossing_found"] = False
    values = {"grid_min_gap": float(gaps[k_min])}
    meta = _metadata(cfg, checks, values, levels=[j, j + 1], crossing=crossing_meta)
    return ResultTable(
        ["omega_c", "energy_lower", "energy_upper", "gap", "is_min_gap"], rows, meta
    )


def run_crossing(cfg: ExperimentConfig) -> ResultTable:
    space = HilbertSpace(cfg.n_max)
    crossing = find_avoided_crossing(space, _default_params(cfg), cfg.bracket)
    row = (
        crossing.omega_c_star,
        crossing.gap,
        crossing.level_lower,
        crossing.level_upper,
        crossing.overlap_photon_lower,
        crossing.overlap_excited_lower,
        crossing.overlap_photon_upper,
        crossing.overlap_excited_upper,
    )
    meta = _metadata(cfg, {"crossing_found": True}, {"gap": crossing.gap})
    return ResultTable(
        [
            "omega_c_star",
            "gap",
            "level_lower",
            "level_upper",
            "overlap_photon_lower",
            "overlap_excited_lower",
            "overlap_photon_upper",
            "overlap_excited_upper",
        ],
        [row],
        meta,
    )


# ---------------------------------------------------------------------------
# hybrid fidelity sweeps


def _fidelity_point(space, params, bracket):
    try:
        crossing = find_avoided_crossing(space, params, bracket)
    except CrossingNotFoundError:
        return (float("nan"), float("nan"), float("nan"), -1, -1, "no_crossing")
    eig = eigensystem(space, params.with_omega_c(crossing.omega_c_star))
    fid = hybrid_fidelities(eig)
    status = "ok" if fid.adjacent else "nonadjacent"
    return (
        crossing.omega_c_star,
        fid.fidelity_plus,
        fid.fidelity_minus,
        fid.index_plus,
        fid.index_minus,
        status,
    )


def run_fidelity_vs_delta(cfg: ExperimentConfig) -> ResultTable:
    space = HilbertSpace(cfg.n_max)
    grid = _grid(cfg.delta_grid)

    def point(delta: float):
        params = _default_params(cfg, delta=float(delta))
        return (float(delta),) + _fidelity_point(space, params, cfg.bracket)

    rows = _parallel_map(point, grid, cfg.resolve_threads())
    n_failed = sum(1 for r in rows if r[-1] == "no_crossing")
    checks = {"all_points_located": n_failed == 0}
    values = {"points_failed": n_failed}
    return ResultTable(
        [
            "delta",
            "omega_c_star",
            "fidelity_plus",
            "fidelity_minus",
            "index_plus",
            "index_minus",
            "status",
        ],
        rows,
        _metadata(cfg, checks, values),
    )


def run_fidelity_vs_lambda(cfg: ExperimentConfig) -> ResultTable:
    space = HilbertSpace(cfg.n_max)
    grid = _grid(cfg.lambda_grid)

    def point(lam: float):
        params = _default_params(cfg, lambda_a=float(lam), lambda_b=float(lam))
        return (float(lam),) + _fidelity_point(space, params, cfg.bracket)

    rows = _parallel_map(point, grid, cfg.resolve_threads())
    n_failed = sum(1 for r in rows if r[-1] == "no_crossing")
    checks = {"all_points_located": n_failed == 0}
    values = {"points_failed": n_failed}
    return ResultTable(
        [
            "lambda",
            "omega_c_star",
            "fidelity_plus",
            "fidelity_minus",
            "index_plus",
            "index_minus",
            "status",
        ],
        rows,
        _metadata(cfg, checks, values),
    )


# ---------------------------------------------------------------------------
# dynamics


def _evolution_run(cfg: ExperimentConfig, params: SystemParams, space: HilbertSpace,
                   samples: int, periods: float):
    crossing = find_avoided_crossing(space, params, cfg.bracket)
    eig = eigensystem(space, params.with_omega_c(crossing.omega_c_star))
    rates = rates_from_config(cfg)
    channels = dressed_jump_channels(eig, rates, cfg.cutoff)
    gap = max(crossing.gap, GAP_FLOOR)
    horizon = periods * 2.0 * math.pi / gap
    if rates.cavity > 0:
        # After many bath lifetimes nothing moves; capping the horizon keeps
        # near-degenerate points (tiny gap, huge period) integrable.
        horizon = min(horizon, 50.0 / rates.cavity)
    t_grid = np.linspace(0.0, horizon, samples)
    rho0 = DensityMatrix.pure_bare(space, PHOTON_STATE)
    record = evolve(rho0, eig, channels, t_grid, estimator=cfg.estimator)
    return crossing, record


def run_time_evolution(cfg: ExperimentConfig) -> ResultTable:
    space = HilbertSpace(cfg.n_max)
    params = _default_params(cfg)
    crossing, record = _evolution_run(cfg, params, space, cfg.samples, cfg.periods)
    rows = [
        (
            float(record.times[k]),
            float(record.photon_number[k]),
            float(record.bare_photon_number[k]),
            float(record.p_qutrit_excited[k]),
            float(record.p_both_excited[k]),
            float(record.flux[k]),
            float(record.trace_error[k]),
        )
        for k in range(len(record.times))
    ]
    checks = {
        "trace_preserved": float(np.max(record.trace_error)) <= TRACE_TOL,
        "positivity": float(np.min(record.min_eigenvalue)) >= -POSITIVITY_TOL,
        "cutoff_audit": record.population_above_cutoff < CUTOFF_AUDIT_TOL,
    }
    values = {
        "max_trace_error": float(np.max(record.trace_error)),
        "min_eigenvalue": float(np.min(record.min_eigenvalue)),
        "population_above_cutoff": record.population_above_cutoff,
        "rhs_evaluations": record.rhs_evaluations,
    }
    meta = _metadata(cfg, checks, values, crossing=asdict(crossing))
    return ResultTable(
        [
            "t",
            "photon_number",
            "bare_photon_number",
            "p_qutrit_excited",
            "p_both_excited",
            "flux",
            "trace_error",
        ],
        rows,
        meta,
    )


def run_max_difference_sweep(cfg: ExperimentConfig) -> ResultTable:
    space = HilbertSpace(cfg.n_max)
    lambdas = _grid(cfg.lambda_grid)
    points = [(float(d), float(lam)) for d in cfg.delta_values for lam in lambdas]

    def point(pair):
        delta, lam = pair
        params = _default_params(cfg, delta=delta, lambda_a=lam, lambda_b=lam)
        try:
            _, record = _evolution_run(cfg, params, space, cfg.samples, 1.0)
        except CrossingNotFoundError:
            return (delta, lam, float("nan"), "no_crossing", float("nan"), 0.0)
        d_val = max_difference(record)
        return (
            delta,
            lam,
            d_val,
            "ok",
            float(np.max(record.trace_error)),
            record.population_above_cutoff,
        )

    raw = _parallel_map(point, points, cfg.resolve_threads())
    group_max: dict[float, float] = {}
    for delta, lam, d_val, status, _, _ in raw:
        if status == "ok" and (
            delta not in group_max or d_val > group_max[delta]
        ):
            group_max[delta] = d_val
    rows = [
        (delta, lam, d_val, d_val == group_max.get(delta), status)
        for delta, lam, d_val, status, _, _ in raw
    ]
    worst_trace = max((r[4] for r in raw if r[3] == "ok"), default=0.0)
    worst_tail = max((r[5] for r in raw if r[3] == "ok"), default=0.0)
    n_failed = sum(1 for r in raw if r[3] != "ok")
    checks = {
        "trace_preserved": worst_trace <= TRACE_TOL,
        "cutoff_audit": worst_tail < CUTOFF_AUDIT_TOL,
        "all_points_located": n_failed == 0,
    }
    values = {
        "max_trace_error": worst_trace,
        "population_above_cutoff": worst_tail,
        "points_failed": n_failed,
    }
    return ResultTable(
        ["delta", "lambda", "max_difference", "is_group_max", "status"],
        rows,
        _metadata(cfg, checks, values),
    )


# ---------------------------------------------------------------------------
# perturbation-theory experiments


def run_coupling_map(cfg: ExperimentConfig) -> ResultTable:
    space = HilbertSpace(cfg.n_max)
    lambdas = _grid(cfg.map_lambda_grid)
    deltas = _grid(cfg.map_delta_grid)
    cells = [(float(lam), float(d)) for lam in lambdas for d in deltas]

    def cell(pair):
        lam, delta = pair
        params = _default_params(cfg, delta=delta, lambda_a=lam, lambda_b=lam)
        closed = 2.0 * closed_form_coupling(params)
        try:
            crossing = find_avoided_crossing(space, params, cfg.bracket)
        except CrossingNotFoundError:
            return (lam, delta, float("nan"), closed, "no_crossing")
        return (lam, delta, crossing.gap, closed, "ok")

    rows = _parallel_map(cell, cells, cfg.resolve_threads())
    n_failed = sum(1 for r in rows if r[-1] != "ok")
    checks = {"all_cells_located": n_failed == 0}
    values = {"cells_failed": n_failed}
    return ResultTable(
        ["lambda", "delta", "splitting_numeric", "splitting_closed_form", "status"],
        rows,
        _metadata(cfg, checks, values),
    )


def run_paths(cfg: ExperimentConfig) -> ResultTable:
    space = HilbertSpace(cfg.n_max)
    params = _default_params(cfg)
    enum = enumerate_paths(space, params, PHOTON_STATE, EXCITED_STATE, cfg.order)
    lam = {
        "qutrit_ef": params.lambda_a,
        "qutrit_fg": params.lambda_a,
        "qubit": params.lambda_b,
    }
    rows = []
    for i, path in enumerate(enum.paths):
        element = 1.0
        for channel, amp in zip(path.channels, path.step_amplitudes):
            element *= lam[channel] * amp
        d1, d2 = path.energy_denominators
        rows.append(
            (
                i,
                path.describe(),
                path.step_amplitudes[0],
                path.step_amplitudes[1],
                path.step_amplitudes[2],
                d1,
                d2,
                element / (d1 * d2),
            )
        )
    total = path_sum_coupling(enum, params)
    closed = closed_form_coupling(params)
    rel = abs(total - closed) / closed if closed else 0.0
    checks = {
        "matches_closed_form": rel < 1e-10,
        "no_truncation_losses": enum.truncation_excluded == 0,
    }
    values = {
        "path_sum": total,
        "closed_form": closed,
        "relative_difference": rel,
        "truncation_excluded": enum.truncation_excluded,
    }
    return ResultTable(
        [
            "path_index",
            "states",
            "amp_1",
            "amp_2",
            "amp_3",
            "denom_1",
            "denom_2",
            "contribution",
        ],
        rows,
        _metadata(cfg, checks, values),
    )


# ---------------------------------------------------------------------------
# truncation audit


def run_audit(cfg: ExperimentConfig) -> ResultTable:
    n_levels = 8
    results = []
    for n_max in (cfg.n_max, cfg.n_max + cfg.audit_step):
        space = HilbertSpace(n_max)
        params = _default_params(cfg, n_max=n_max)
        crossing = find_avoided_crossing(space, params, cfg.bracket)
        eig = eigensystem(space, params.with_omega_c(crossing.omega_c_star))
        results.append((n_max, crossing, eig.energies[:n_levels]))

    (n_base, cross_base, e_base), (n_chk, cross_chk, e_chk) = results
    gap_drift = abs(cross_base.gap - cross_chk.gap) / max(cross_base.gap, GAP_FLOOR)
    energy_drift = float(
        np.max(np.abs(e_base - e_chk) / np.maximum(1.0, np.abs(e_base)))
    )
    passed = energy_drift <= ENERGY_DRIFT_TOL
    row = (
        n_base,
        n_chk,
        cross_base.omega_c_star,
        cross_chk.omega_c_star,
        cross_base.gap,
        cross_chk.gap,
        gap_drift,
        energy_drift,
        passed,
    )
    checks = {"energies_converged": passed}
    values = {"gap_drift_rel": gap_drift, "energy_drift_rel": energy_drift}
    table = ResultTable(
        [
            "n_max",
            "n_max_check",
            "omega_c_star",
            "omega_c_star_check",
            "gap",
            "gap_check",
            "gap_drift_rel",
            "energy_drift_rel",
            "passed",
        ],
        [row],
        _metadata(cfg, checks, values),
    )
    if not passed:
        raise ConvergenceError(
            f"energy drift {energy_drift:.3e} between n_max={n_base} and "
            f"n_max={n_chk} exceeds {ENERGY_DRIFT_TOL:.0e}; raise n_max",
            table,
        )
    return table


_RUNNERS = {
    "spectrum_sweep": run_spectrum_sweep,
    "fidelity_vs_delta": run_fidelity_vs_delta,
    "fidelity_vs_lambda": run_fidelity_vs_lambda,
    "time_evolution": run_time_evolution,
    "max_difference_sweep": run_max_difference_sweep,
    "coupling_map": run_coupling_map,
    "paths": run_paths,
    "crossing": run_crossing,
    "audit": run_audit,
}


def run_experiment(cfg: ExperimentConfig) -> ResultTable:
    return _RUNNERS[cfg.experiment](cfg)
