"""
Readout rotation error on a single qubit
========================================

An X measurement is a Hadamard-like prerotation followed by a Z readout.
Shifting the prerotation phase by N degrees makes the readout measure
cos(N) X - sin(N) Y instead of X. Z-type observables need no prerotation and
do not notice the error at all.
"""

# %%
import numpy as np

from vqelab.measure import EstimatorMode, RotationError, estimate_pauli
from vqelab.state import Statevector, random_state

plus = Statevector(1, np.array([1, 1]) / np.sqrt(2))
for n in range(-15, 16, 5):
    print(f"N = {n:+3d}  <X>_N = {estimate_pauli(plus, 'X', RotationError(n)):.6f}  cos N = {np.cos(np.deg2rad(n)):.6f}")

# %%
# On a generic state the Y component leaks in with the opposite sign.
s = random_state(1, np.random.default_rng(0))
x, y = (estimate_pauli(s, p, 0) for p in "XY")
for n in (-10, 0, 10):
    e = np.deg2rad(n)
    print(n, estimate_pauli(s, "X", n), np.cos(e) * x - np.sin(e) * y)

# %%
# Finite shots add binomial noise on top of the bias.
rng = np.random.default_rng(1)
draws = [estimate_pauli(plus, "X", 10, EstimatorMode.sampled(1024), rng) for _ in range(200)]
print(f"mean {np.mean(draws):.4f} +- {np.std(draws) / np.sqrt(len(draws)):.4f}, exact {np.cos(np.deg2rad(10)):.4f}")

# %%
# A Z string is bit-for-bit identical at every angle.
s3 = random_state(3, np.random.default_rng(2))
print({estimate_pauli(s3, "ZIZ", n) for n in np.arange(-15, 15.5, 0.5)})
