"""Dense statevectors, single-qubit gates, expectation values and Z-basis sampling.

Qubit 0 is the least-significant bit of the amplitude index. Operations return
new ``Statevector`` objects; amplitude arrays are marked read-only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from vqelab.errors import CapacityError, DimensionError, ValidationError
from vqelab.pauli import PauliString, apply_pauli

MAX_QUBITS = 12
NORM_TOL = 1e-10

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True, eq=False)
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise CapacityError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 1 << self.n_qubits:
            raise DimensionError(f"{amps.size} amplitudes do not describe {self.n_qubits} qubits")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"statevector norm^2 is {norm}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> Statevector:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = int(round(np.log2(amps.size)))
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> Statevector:
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(n_qubits, amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


def zero_state(n_qubits: int) -> Statevector:
    """|0...0>."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise CapacityError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    return Statevector.basis(n_qubits, 0)


def random_state(n_qubits: int, rng: np.random.Generator) -> Statevector:
    """Haar-random pure state."""
    v = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return Statevector.from_amplitudes(v, normalize=True)


def check_unitary(u: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise DimensionError(f"single-qubit unitary must be 2x2, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - IDENTITY)) > tol:
        raise ValidationError("matrix is not unitary")
    return u


def _apply_1q(amps: np.ndarray, n: int, qubit: int, u: np.ndarray) -> np.ndarray:
    # C-order reshape puts the most significant bit (qubit n-1) on axis 0
    psi = amps.reshape((2,) * n)
    axis = n - 1 - qubit
    psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [axis])), 0, axis)
    return psi.reshape(-1)


def apply_single_qubit(s: Statevector, qubit: int, u: np.ndarray) -> Statevector:
    """Apply the 2x2 unitary ``u`` to ``qubit``."""
    if not 0 <= qubit < s.n_qubits:
        raise DimensionError(f"qubit {qubit} out of range for {s.n_qubits} qubits")
    u = check_unitary(u)
    return Statevector(s.n_qubits, _apply_1q(s.amplitudes, s.n_qubits, qubit, u))


def u2_matrix(phi: float, lam: float) -> np.ndarray:
    """``U2(phi, lam) = [[1, -e^{i lam}], [e^{i phi}, e^{i(phi + lam)}]] / sqrt(2)``."""
    return np.array(
        [[1, -np.exp(1j * lam)], [np.exp(1j * phi), np.exp(1j * (phi + lam))]], dtype=complex
    ) / np.sqrt(2)


def rx_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def apply_u2(s: Statevector, qubit: int, phi: float, lam: float) -> Statevector:
    return apply_single_qubit(s, qubit, u2_matrix(phi, lam))


def expectation(s: Statevector, p: PauliString | str) -> float:
    """``<s|P|s>`` for a Pauli string ``p``."""
    p = p if isinstance(p, PauliString) else PauliString(p)
    if p.n_qubits != s.n_qubits:
        raise DimensionError(f"{p.n_qubits}-qubit string on a {s.n_qubits}-qubit state")
    value = np.vdot(s.amplitudes, apply_pauli(p.axes, s.amplitudes))
    return float(np.clip(value.real, -1.0, 1.0))


def sample_z_basis(s: Statevector, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``shots`` computational-basis outcomes.

    Returns an integer array of length ``2**n`` whose entry ``i`` counts
    outcome ``i`` (bit ``q`` of ``i`` is the reading of qubit ``q``).
    """
    if shots < 1:
        raise ValidationError("shots must be at least 1")
    p = s.probabilities()
    p = p / p.sum()
    return rng.multinomial(shots, p)


def bitstring(index: int, n_qubits: int) -> str:
    """Outcome label with qubit 0 first."""
    return "".join(str((index >> q) & 1) for q in range(n_qubits))


def counts_to_dict(counts: np.ndarray, n_qubits: int) -> dict[str, int]:
    return {bitstring(i, n_qubits): int(c) for i, c in enumerate(counts) if c}
