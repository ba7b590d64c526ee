"""Command-line entry point: `sim <experiment> [options]`.

Reads an optional JSON config, applies flag overrides, runs the experiment
and writes CSV (to --out, or stdout when omitted).  Exit code is 0 only when
every invariant diagnostic of the run passed.
"""

from __future__ import annotations

import argparse
import sys

from .config import EXPERIMENTS, load_config
from .experiments import ConvergenceError, run_experiment

_NUMERIC_KEYS = {
    "delta",
    "lambda",
    "lambda_a",
    "lambda_b",
    "omega_c",
    "samples",
    "periods",
    "cutoff",
    "order",
    "n_max",
    "audit_step",
}
_RATE_KEYS = {"kappa", "gamma_qutrit_upper", "gamma_qutrit_lower", "gamma_qubit"}
_INT_KEYS = {"samples", "cutoff", "order", "n_max", "audit_step"}


def _parse_assignments(pairs: list[str], allowed: set[str]) -> dict:
    out: dict = {}
    for chunk in pairs:
        for item in chunk.split(","):
            item = item.strip()
            if not item:
                continue
            if "=" not in item:
                raise SystemExit(f"expected key=value, got {item!r}")
            key, _, raw = item.partition("=")
            key = key.strip()
            if key not in allowed:
                raise SystemExit(
                    f"unknown key {key!r}; allowed: {', '.join(sorted(allowed))}"
                )
            out[key] = int(raw) if key in _INT_KEYS else float(raw)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sim",
        description="Parity-conserving cavity QED experiments",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", help="CSV output path (default: stdout)")
        p.add_argument("--json", dest="json_out", help="also write JSON here")
        p.add_argument("--n-max", type=int, help="Fock-space truncation")
        p.add_argument(
            "--estimator",
            choices=("dressed", "bare"),
            help="excitation-population estimator",
        )
        p.add_argument("--threads", type=int, help="worker threads for sweeps")
        p.add_argument(
            "--params",
            action="append",
            default=[],
            metavar="K=V[,K=V...]",
            help="override model parameters (delta, lambda, omega_c, ...)",
        )
        p.add_argument(
            "--rates",
            action="append",
            default=[],
            metavar="K=V[,K=V...]",
            help="override bath rates (kappa, gamma_qutrit_upper, ...)",
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides: dict = {}
    overrides.update(_parse_assignments(args.params, _NUMERIC_KEYS))
    overrides.update(_parse_assignments(args.rates, _RATE_KEYS))
    if args.n_max is not None:
        overrides["n_max"] = args.n_max
    if args.estimator is not None:
        overrides["estimator"] = args.estimator
    if args.threads is not None:
        overrides["threads"] = args.threads

    try:
        cfg = load_config(args.config, args.experiment, overrides)
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        table = run_experiment(cfg)
    except ConvergenceError as exc:
        table = exc.table
        if args.out:
            table.write_csv(args.out)
        print(f"audit failed: {exc}", file=sys.stderr)
        return 1

    if args.out:
        table.write_csv(args.out)
    else:
        sys.stdout.write(table.to_csv_text())
    if args.json_out:
        table.write_json(args.json_out)

    diag = table.metadata["diagnostics"]
    for name, passed in diag["checks"].items():
        status = "pass" if passed else "FAIL"
        print(f"check {name}: {status}", file=sys.stderr)
    return 0 if diag["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
