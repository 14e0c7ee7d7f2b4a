"""Pauli-observable estimation through basis rotations with a coherent error.

An X readout rotates the qubit with ``U2(0, pi + eps)`` before the Z-basis
measurement, where ``eps`` is the injected over-rotation (``eps > 0``) or
under-rotation (``eps < 0``). Y readouts use ``U2(0, pi/2)`` and are left
unperturbed unless ``inject_y`` is set. Z and identity factors need no
rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from vqelab.errors import DimensionError, ValidationError
from vqelab.pauli import PauliAxis, PauliString, QubitHamiltonian, simplify
from vqelab.state import IDENTITY, Statevector, _apply_1q, sample_z_basis, u2_matrix


@dataclass(frozen=True)
class RotationError:
    """Coherent error on the X-readout rotation, in degrees."""

    epsilon_degrees: float = 0.0
    inject_y: bool = False

    def __post_init__(self):
        if not math.isfinite(self.epsilon_degrees):
            raise ValidationError("rotation error must be finite")
        object.__setattr__(self, "epsilon_degrees", float(self.epsilon_degrees))

    @property
    def radians(self) -> float:
        return math.pi / 180 * self.epsilon_degrees


NO_ERROR = RotationError(0.0)


@dataclass(frozen=True)
class EstimatorMode:
    """``shots=None`` is the exact (infinite-shot) estimator."""

    shots: int | None = None

    def __post_init__(self):
        if self.shots is not None and self.shots < 1:
            raise ValidationError("sampled mode needs shots >= 1")

    @classmethod
    def analytic(cls) -> EstimatorMode:
        return cls(None)

    @classmethod
    def sampled(cls, shots: int = 1024) -> EstimatorMode:
        return cls(int(shots))

    @property
    def is_analytic(self) -> bool:
        return self.shots is None


ANALYTIC = EstimatorMode.analytic()


def _as_error(err: RotationError | float) -> RotationError:
    return err if isinstance(err, RotationError) else RotationError(float(err))


def prerotation_for(axis: PauliAxis | str, err: RotationError | float = NO_ERROR) -> np.ndarray:
    """Single-qubit rotation applied before a Z measurement to read ``axis``."""
    err = _as_error(err)
    axis = PauliAxis(axis)
    if axis is PauliAxis.X:
        return u2_matrix(0.0, math.pi + err.radians)
    if axis is PauliAxis.Y:
        return u2_matrix(0.0, math.pi / 2 + (err.radians if err.inject_y else 0.0))
    return IDENTITY.copy()


@dataclass(frozen=True, eq=False)
class MeasurementPlan:
    pauli: PauliString
    prerotations: tuple[np.ndarray, ...]
    measured_mask: int

    @property
    def measured_qubits(self) -> tuple[int, ...]:
        return tuple(q for q in range(self.pauli.n_qubits) if self.measured_mask >> q & 1)


def plan_measurement(p: PauliString | str, err: RotationError | float = NO_ERROR) -> MeasurementPlan:
    p = p if isinstance(p, PauliString) else PauliString(p)
    err = _as_error(err)
    rotations = tuple(prerotation_for(a, err) for a in p.axes)
    mask = sum(1 << q for q, a in enumerate(p.axes) if a != "I")
    return MeasurementPlan(p, rotations, mask)


def rotated_state(s: Statevector, plan: MeasurementPlan) -> Statevector:
    """State just before the Z-basis readout."""
    amps = s.amplitudes
    for q, axis in enumerate(plan.pauli.axes):
        if axis in "XY":
            amps = _apply_1q(amps, s.n_qubits, q, plan.prerotations[q])
    return Statevector(s.n_qubits, amps)


def _parity_signs(n_qubits: int, mask: int) -> np.ndarray:
    idx = np.arange(1 << n_qubits)
    return 1.0 - 2.0 * (np.bitwise_count(idx & mask) & 1)


def estimate_pauli(
    s: Statevector,
    p: PauliString | str,
    err: RotationError | float = NO_ERROR,
    mode: EstimatorMode = ANALYTIC,
    rng: np.random.Generator | None = None,
) -> float:
    """Estimate ``<P>`` by rotating each measured qubit and reading Z parities."""
    plan = plan_measurement(p, err)
    if plan.pauli.n_qubits != s.n_qubits:
        raise DimensionError(f"{plan.pauli.n_qubits}-qubit string on a {s.n_qubits}-qubit state")
    if plan.measured_mask == 0:
        return 1.0
    signs = _parity_signs(s.n_qubits, plan.measured_mask)
    rotated = rotated_state(s, plan)
    if mode.is_analytic:
        return float(np.clip(signs @ rotated.probabilities(), -1.0, 1.0))
    if rng is None:
        raise ValidationError("sampled mode needs a random generator")
    counts = sample_z_basis(rotated, mode.shots, rng)
    return float(signs @ counts) / mode.shots


def estimate_energy(
    s: Statevector,
    h: QubitHamiltonian,
    err: RotationError | float = NO_ERROR,
    mode: EstimatorMode = ANALYTIC,
    rng: np.random.Generator | None = None,
) -> float:
    """``sum_a w_a * estimate_pauli(s, P_a)``; each term gets its own shot batch.

    The identity term is added exactly. In sampled mode the terms draw from
    ``rng`` in the canonical (sorted) term order, so the result is a
    deterministic function of the generator state.
    """
    if h.n_qubits != s.n_qubits:
        raise DimensionError(f"{h.n_qubits}-qubit Hamiltonian on a {s.n_qubits}-qubit state")
    h = simplify(h)
    energy = 0.0
    for t in h.terms:
        if abs(t.coefficient.imag) > 1e-12:
            raise ValidationError(f"non-Hermitian term {t.coefficient} * {t.string}")
        w = t.coefficient.real
        if t.string.is_identity():
            energy += w
        else:
            energy += w * estimate_pauli(s, t.string, err, mode, rng)
    return energy


__all__ = [
    "RotationError",
    "EstimatorMode",
    "MeasurementPlan",
    "ANALYTIC",
    "NO_ERROR",
    "prerotation_for",
    "plan_measurement",
    "estimate_pauli",
    "estimate_energy",
    "sample_z_basis",
]
