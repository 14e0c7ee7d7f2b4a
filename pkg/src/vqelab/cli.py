"""Command-line entry point: ``vqelab run | fci | stats``."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from vqelab.errors import VQELabError
from vqelab.harness.experiment import (
    ANSATZ_PRESETS,
    INIT_POLICIES,
    MODES,
    ExperimentConfig,
    load_molecule,
    sweep,
)
from vqelab.harness.metrics import summarize
from vqelab.harness.plots import emit_plots
from vqelab.harness.records import read_records, write_records
from vqelab.optimize import OptimizerConfig
from vqelab.pauli import exact_ground_energy


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vqelab", description="Pulse-level VQE under readout rotation error.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="sweep the X-readout rotation error and record VQE results")
    run.add_argument("--molecule", default="h2", help="molecule file, or bundled name h2 / heh+")
    run.add_argument("--n-start", type=float, default=-15.0)
    run.add_argument("--n-end", type=float, default=15.0)
    run.add_argument("--n-step", type=float, default=0.5)
    run.add_argument("--shots", type=int, default=1024)
    run.add_argument("--maxiter", type=int, default=100)
    run.add_argument("--rhobeg", type=float, default=0.1)
    run.add_argument("--rhoend", type=float, default=0.03)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--mode", choices=MODES, default="sampled")
    run.add_argument("--ansatz", choices=ANSATZ_PRESETS, default="excitation")
    run.add_argument("--init", choices=INIT_POLICIES, default=None, help="initial-parameter policy")
    run.add_argument("--repeats", type=int, default=1, help="runs averaged per grid point")
    run.add_argument("--workers", type=int, default=None)
    run.add_argument("--inject-y", action="store_true", help="also perturb the Y readout rotation")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--no-plots", action="store_true")

    fci = sub.add_parser("fci", help="print the exact ground energy of a molecule")
    fci.add_argument("--molecule", required=True)

    stats = sub.add_parser("stats", help="recompute sweep statistics from a records CSV")
    stats.add_argument("csv")
    return p


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.6f}"


def _print_summary(summary, out=None):
    out = out or sys.stdout
    for key, value in summary.as_dict().items():
        print(f"{key:28s} {_fmt(value)}", file=out)


def _cmd_run(args) -> int:
    cfg = ExperimentConfig(
        molecule=args.molecule,
        ansatz=args.ansatz,
        n_start=args.n_start,
        n_end=args.n_end,
        n_step=args.n_step,
        shots=args.shots,
        mode=args.mode,
        optimizer=OptimizerConfig(args.maxiter, args.rhobeg, args.rhoend),
        seed=args.seed,
        init_policy=args.init,
        inject_y=args.inject_y,
        repeats=args.repeats,
        workers=args.workers,
        out_dir=args.out,
    )
    result = sweep(cfg)
    meta = {
        "molecule": cfg.molecule,
        "e_fci": repr(result.e_fci),
        "ansatz": cfg.ansatz,
        "init_policy": cfg.policy,
        "mode": cfg.mode,
        "shots": cfg.shots,
        "n_start": cfg.n_start,
        "n_end": cfg.n_end,
        "n_step": cfg.n_step,
        "maxiter": cfg.optimizer.max_iterations,
        "rhobeg": cfg.optimizer.rhobeg,
        "rhoend": cfg.optimizer.rhoend,
        "seed": cfg.seed,
        "repeats": cfg.repeats,
        "inject_y": cfg.inject_y,
    }
    csv_path, summary_path = write_records(result.records, result.summary, args.out, meta)
    print(f"E_FCI = {result.e_fci:.9f} Hartree, {len(result.records)} grid points")
    _print_summary(result.summary)
    print(f"wrote {csv_path} and {summary_path}")
    if not args.no_plots:
        for path in emit_plots(result.records, args.out, label=Path(str(cfg.molecule)).stem):
            print(f"wrote {path}")
    return 0


def _cmd_fci(args) -> int:
    print(f"{exact_ground_energy(load_molecule(args.molecule)):.9f}")
    return 0


def _cmd_stats(args) -> int:
    _print_summary(summarize(read_records(args.csv)))
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    handler = {"run": _cmd_run, "fci": _cmd_fci, "stats": _cmd_stats}[args.command]
    try:
        return handler(args)
    except (VQELabError, OSError) as exc:
        print(f"vqelab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
