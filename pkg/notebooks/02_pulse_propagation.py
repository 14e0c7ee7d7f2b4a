"""
Piecewise-constant drives and the pulse ansatz
==============================================

A drive channel holds complex samples; each sample is one constant segment of
the Hamiltonian (rabi/2)(Re w X + Im w Y), optionally conditioned on a control
qubit through a Z factor. Propagation multiplies exact segment exponentials.
"""

# %%
import numpy as np

from vqelab.pulse import (
    AnsatzSpec,
    DriveChannel,
    Envelope,
    PulseSchedule,
    build_ansatz,
    dyson_propagator,
    propagate,
    propagator,
    schedule_text,
)
from vqelab.state import rx_matrix, zero_state

# A constant drive of area pi is an X gate up to phase.
sched = PulseSchedule(1, (DriveChannel(0, Envelope([1.0], np.pi / 0.2), 0.2),))
print(np.round(propagator(sched), 12))
print(np.allclose(propagator(sched), rx_matrix(np.pi)))

# %%
# Order matters: a single-qubit rotation followed by a conditional one.
a = DriveChannel(0, Envelope([0.9], 8.0), 0.25)
b = DriveChannel((0, 1), Envelope([0.8j], 8.0), 0.25, offset=8.0)
two = PulseSchedule(2, (a, b))
print(schedule_text(two))
print(np.round(np.abs(propagate(zero_state(2), two).amplitudes) ** 2, 4))

# %%
# Weak drives are well described by a second-order Dyson series.
for scale in (0.4, 0.2, 0.1):
    weak = PulseSchedule(2, (DriveChannel(0, Envelope([scale, -scale / 2], 2.0), 0.2),
                             DriveChannel((1, 0), Envelope([scale * 1j], 3.0), 0.2)))
    print(scale, np.linalg.norm(dyson_propagator(weak, 2) - propagator(weak), 2))

# %%
# The VQE ansatz: blocks of per-qubit and coupling channels, one
# (magnitude, phase) pair per channel per block.
spec = AnsatzSpec.linear_chain(3, blocks=2)
theta = np.random.default_rng(0).uniform(0, 0.5, spec.n_params)
psi = propagate(zero_state(3), build_ansatz(spec, theta))
print(spec.n_params, np.round(np.abs(psi.amplitudes) ** 2, 4))
