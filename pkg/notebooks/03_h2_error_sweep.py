"""
H2 under readout rotation error
===============================

Sweep N from -15 to 15 degrees in half-degree steps. Every grid point runs a
full VQE with 1024 shots per Pauli term and at most 100 energy evaluations,
then accuracy and iteration count are compared with the N = 0 run.
"""

# %%
from pathlib import Path

import numpy as np

from vqelab.harness import ExperimentConfig, emit_plots, load_molecule, sweep, write_records
from vqelab.pauli import exact_ground_energy

OUT = Path(__file__).resolve().parent / "output" / "h2"
h = load_molecule("h2")
print(f"{len(h)} Pauli terms, E_FCI = {exact_ground_energy(h):.9f} Hartree")

# %%
cfg = ExperimentConfig(molecule="h2", seed=0)
result = sweep(cfg, h)
for r in result.records[::10]:
    print(f"N = {r.epsilon_degrees:+6.1f}  E = {r.energy:.6f}  iters = {r.iterations:3.0f}  "
          f"acc = {r.accuracy:.5f}  dacc = {r.accuracy_deviation:+.5f}  diter = {100 * r.iteration_deviation:+.2f} %")

# %%
s = result.summary
print(f"accuracy at N = 0      {s.accuracy_at_zero:.5f} %")
print(f"average accuracy       {s.average_accuracy:.5f} %")
print(f"max accuracy deviation {s.max_accuracy_deviation:+.6f} points")
print(f"iteration deviation    mean {s.iteration_deviation_mean:.4f}  std {s.iteration_deviation_std:.4f}  "
      f"max {s.iteration_deviation_max:+.4f}")
print(f"correlation with |N|   N > 0: {s.correlation_positive:+.4f}  N < 0: {s.correlation_negative:+.4f}")

# %%
# Readout error costs little accuracy; shot noise dominates the spread.
devs = np.array([r.accuracy_deviation for r in result.records])
print(f"mean |accuracy deviation| {np.abs(devs).mean():.4f} points")
write_records(result.records, s, OUT, {"molecule": "h2", "seed": cfg.seed})
print(emit_plots(result.records, OUT, label="H2"))
