"""Error-angle sweeps: VQE runs, metrics, persistence and plots."""

from vqelab.harness.experiment import (
    ExperimentConfig,
    SweepResult,
    VQEOutcome,
    error_grid,
    excitation_ansatz,
    excitation_start,
    initial_parameters,
    load_molecule,
    make_ansatz,
    point_seed,
    run_vqe,
    sweep,
)
from vqelab.harness.metrics import (
    SweepSummary,
    accuracy,
    accuracy_deviation,
    iteration_deviation,
    pearson,
    signed_extreme,
    summarize,
)
from vqelab.harness.plots import emit_plots
from vqelab.harness.records import (
    CSV_HEADER,
    RunRecord,
    build_records,
    read_records,
    read_summary,
    write_records,
)

__all__ = [
    "CSV_HEADER",
    "ExperimentConfig",
    "RunRecord",
    "SweepResult",
    "SweepSummary",
    "VQEOutcome",
    "accuracy",
    "accuracy_deviation",
    "build_records",
    "emit_plots",
    "error_grid",
    "excitation_ansatz",
    "excitation_start",
    "initial_parameters",
    "iteration_deviation",
    "load_molecule",
    "make_ansatz",
    "pearson",
    "point_seed",
    "read_records",
    "read_summary",
    "run_vqe",
    "signed_extreme",
    "summarize",
    "sweep",
    "write_records",
]
