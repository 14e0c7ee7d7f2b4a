"""Piecewise-constant pulse schedules and their propagation.

Drives are resonant and written in the rotating frame, so a single-qubit
channel with complex envelope sample ``w`` (after applying the channel phase)
contributes ``rabi_rate/2 * (Re w * X_t + Im w * Y_t)`` to the Hamiltonian and
a coupling channel ``(c, t)`` contributes ``rabi_rate/2 * (Re w * Z_c X_t +
Im w * Z_c Y_t)``. Time is in ns and rates in rad/ns (hbar = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from vqelab.errors import DimensionError, ValidationError
from vqelab.pauli import PauliString
from vqelab.state import Statevector

Target = Union[int, tuple[int, int]]

_TIME_DECIMALS = 9


@dataclass(frozen=True, eq=False)
class Envelope:
    samples: np.ndarray
    dt: float

    def __post_init__(self):
        samples = np.array(self.samples, dtype=complex).reshape(-1)
        if samples.size == 0:
            raise ValidationError("an envelope needs at least one sample")
        if np.any(np.abs(samples) > 1.0 + 1e-12):
            raise ValidationError("envelope samples must satisfy |sample| <= 1")
        if not self.dt > 0:
            raise ValidationError(f"dt must be positive, got {self.dt}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "dt", float(self.dt))

    @property
    def duration(self) -> float:
        return self.samples.size * self.dt

    def __eq__(self, other):
        return (
            isinstance(other, Envelope)
            and self.dt == other.dt
            and np.array_equal(self.samples, other.samples)
        )


@dataclass(frozen=True)
class DriveChannel:
    """A drive on one qubit, or a cross-resonance-style coupling ``(control, target)``."""

    target: Target
    envelope: Envelope
    rabi_rate: float
    phase: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        if isinstance(self.target, (tuple, list)):
            c, t = (int(x) for x in self.target)
            if c == t:
                raise ValidationError("coupling channel needs two distinct qubits")
            object.__setattr__(self, "target", (c, t))
        else:
            object.__setattr__(self, "target", int(self.target))
        if not self.rabi_rate > 0:
            raise ValidationError(f"rabi_rate must be positive, got {self.rabi_rate}")
        if self.offset < 0:
            raise ValidationError("channel offset must be non-negative")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.target if isinstance(self.target, tuple) else (self.target,)

    @property
    def end(self) -> float:
        return self.offset + self.envelope.duration

    def sample_at(self, t: float) -> complex:
        """Envelope value (channel phase applied) active at time ``t``."""
        k = math.floor((t - self.offset) / self.envelope.dt)
        if t < self.offset or k >= self.envelope.samples.size:
            return 0j
        return complex(self.envelope.samples[k]) * complex(np.exp(1j * self.phase))


@dataclass(frozen=True)
class PulseSchedule:
    n_qubits: int
    channels: tuple[DriveChannel, ...]

    def __post_init__(self):
        channels = tuple(self.channels)
        if self.n_qubits < 1:
            raise ValidationError("n_qubits must be positive")
        if not channels:
            raise ValidationError("a schedule needs at least one channel")
        for ch in channels:
            if any(not 0 <= q < self.n_qubits for q in ch.qubits):
                raise ValidationError(f"channel target {ch.target} out of range")
        object.__setattr__(self, "channels", channels)


def schedule_duration(sched: PulseSchedule) -> float:
    """Latest channel end time in ns."""
    if not sched.channels:
        raise ValidationError("a schedule needs at least one channel")
    return max(ch.end for ch in sched.channels)


# --------------------------------------------------------------------------
# Hamiltonian assembly


@lru_cache(maxsize=256)
def _generators(n_qubits: int, target: Target) -> tuple[np.ndarray, np.ndarray]:
    """Dense (G_x, G_y) for a channel, each carrying the 1/2 factor."""
    axes = ["I"] * n_qubits
    if isinstance(target, tuple):
        c, t = target
        axes[c] = "Z"
    else:
        t = target
    axes[t] = "X"
    gx = PauliString("".join(axes)).matrix() / 2
    axes[t] = "Y"
    gy = PauliString("".join(axes)).matrix() / 2
    gx.setflags(write=False)
    gy.setflags(write=False)
    return gx, gy


def segments(sched: PulseSchedule, merge: bool = True) -> list[tuple[float, np.ndarray]]:
    """Split the schedule into ``(duration, H)`` pieces on which H is constant.

    Consecutive pieces with identical drive values are fused when ``merge``
    is true; the product of exact exponentials is unchanged by this.
    """
    edges = {0.0}
    for ch in sched.channels:
        n = ch.envelope.samples.size
        edges.update(round(ch.offset + k * ch.envelope.dt, _TIME_DECIMALS) for k in range(n + 1))
    grid = sorted(edges)
    dim = 1 << sched.n_qubits
    pieces: list[tuple[float, tuple[complex, ...]]] = []
    for a, b in zip(grid[:-1], grid[1:]):
        mid = 0.5 * (a + b)
        key = tuple(ch.sample_at(mid) for ch in sched.channels)
        if merge and pieces and pieces[-1][1] == key:
            pieces[-1] = (pieces[-1][0] + (b - a), key)
        else:
            pieces.append((b - a, key))
    out = []
    for tau, key in pieces:
        h = np.zeros((dim, dim), dtype=complex)
        for ch, w in zip(sched.channels, key):
            if w == 0:
                continue
            gx, gy = _generators(sched.n_qubits, ch.target)
            h += ch.rabi_rate * (w.real * gx + w.imag * gy)
        out.append((tau, h))
    return out


def _step(h: np.ndarray, tau: float) -> np.ndarray:
    """exp(-i h tau) for Hermitian h, by eigendecomposition."""
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * evals * tau)) @ evecs.conj().T


def propagator(sched: PulseSchedule) -> np.ndarray:
    """Time-ordered product of the exact per-piece propagators."""
    dim = 1 << sched.n_qubits
    u = np.eye(dim, dtype=complex)
    for tau, h in segments(sched):
        if not h.any():
            continue
        u = _step(h, tau) @ u
    return u


def propagate(s: Statevector, sched: PulseSchedule) -> Statevector:
    """Evolve ``s`` under the schedule's drive Hamiltonian."""
    if s.n_qubits != sched.n_qubits:
        raise DimensionError(f"{sched.n_qubits}-qubit schedule on a {s.n_qubits}-qubit state")
    amps = np.array(s.amplitudes)
    for tau, h in segments(sched):
        if not h.any():
            continue
        amps = _step(h, tau) @ amps
    amps /= np.linalg.norm(amps)
    return Statevector(s.n_qubits, amps)


def dyson_propagator(sched: PulseSchedule, order: int = 2) -> np.ndarray:
    """Dyson series of the schedule's propagator truncated at ``order`` (1 or 2).

    The time integrals are evaluated exactly on the piecewise-constant grid:
    the first-order term is ``sum_k H_k tau_k`` and the time-ordered
    second-order term is ``sum_k H_k^2 tau_k^2 / 2 + sum_{j<k} H_k H_j tau_k tau_j``.
    The result is not unitary.
    """
    if order not in (1, 2):
        raise ValidationError(f"order must be 1 or 2, got {order}")
    dim = 1 << sched.n_qubits
    first = np.zeros((dim, dim), dtype=complex)
    second = np.zeros((dim, dim), dtype=complex)
    for tau, h in segments(sched, merge=False):
        if order == 2:
            second += h @ first * tau + (h @ h) * (tau * tau / 2)
        first += h * tau
    u = np.eye(dim, dtype=complex) - 1j * first
    if order == 2:
        u = u - second
    return u


def sequence(*schedules: PulseSchedule) -> PulseSchedule:
    """Play schedules back to back (first argument first)."""
    n = schedules[0].n_qubits
    channels = []
    start = 0.0
    for sched in schedules:
        if sched.n_qubits != n:
            raise DimensionError("schedules act on different qubit counts")
        for ch in sched.channels:
            channels.append(
                DriveChannel(ch.target, ch.envelope, ch.rabi_rate, ch.phase, ch.offset + start)
            )
        start += schedule_duration(sched)
    return PulseSchedule(n, tuple(channels))


def schedule_text(sched: PulseSchedule) -> str:
    """Plain-text dump, one line per channel, for golden-file comparisons."""
    lines = [f"schedule n_qubits={sched.n_qubits} duration={schedule_duration(sched)!r}"]
    for k, ch in enumerate(sched.channels):
        target = "-".join(map(str, ch.qubits))
        samples = " ".join(f"{float(z.real)!r}{float(z.imag):+}j" for z in ch.envelope.samples)
        lines.append(
            f"channel {k} target={target} offset={ch.offset!r} dt={ch.envelope.dt!r} "
            f"rabi={ch.rabi_rate!r} phase={ch.phase!r} samples=[{samples}]"
        )
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# ansatz


@dataclass(frozen=True)
class AnsatzSpec:
    """Layout of the trainable pulse ansatz.

    Each of ``blocks`` time slots holds one square pulse per qubit and one per
    coupling pair, all played concurrently. Every pulse is described by a
    magnitude (clamped to [0, 1]) and a phase in radians.
    """

    n_qubits: int
    blocks: int = 3
    pairs: tuple[tuple[int, int], ...] = ()
    samples_per_block: int = 16
    dt: float = 0.5
    rabi_rate: float = 0.2

    def __post_init__(self):
        pairs = tuple((int(c), int(t)) for c, t in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if self.n_qubits < 1:
            raise ValidationError("n_qubits must be positive")
        if self.blocks < 1:
            raise ValidationError("blocks must be at least 1")
        if self.samples_per_block < 1:
            raise ValidationError("samples_per_block must be at least 1")
        if not self.dt > 0 or not self.rabi_rate > 0:
            raise ValidationError("dt and rabi_rate must be positive")
        for c, t in pairs:
            if c == t or not (0 <= c < self.n_qubits and 0 <= t < self.n_qubits):
                raise ValidationError(f"invalid coupling pair {(c, t)}")

    @classmethod
    def linear_chain(cls, n_qubits: int, **kwargs) -> AnsatzSpec:
        pairs = tuple((q, q + 1) for q in range(n_qubits - 1))
        return cls(n_qubits, pairs=pairs, **kwargs)

    @property
    def n_params(self) -> int:
        return 2 * self.blocks * (self.n_qubits + len(self.pairs))

    @property
    def block_duration(self) -> float:
        return self.samples_per_block * self.dt

    def magnitude_mask(self) -> np.ndarray:
        """True at magnitude entries of the parameter vector."""
        mask = np.zeros(self.n_params, dtype=bool)
        mask[0::2] = True
        return mask

    def initial_params(self, magnitude: float = 0.05, phase: float = 0.0) -> np.ndarray:
        theta = np.full(self.n_params, phase, dtype=float)
        theta[self.magnitude_mask()] = magnitude
        return theta


def build_ansatz(spec: AnsatzSpec, theta: Sequence[float]) -> PulseSchedule:
    """Map a parameter vector to a pulse schedule.

    ``theta`` is block-major: within block ``b`` come ``(magnitude, phase)``
    for qubits ``0..n-1`` and then for each coupling pair in order.
    """
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.size != spec.n_params:
        raise DimensionError(f"expected {spec.n_params} parameters, got {theta.size}")
    per_block = theta.reshape(spec.blocks, -1, 2)
    mags = np.clip(per_block[..., 0], 0.0, 1.0)
    amps = mags * np.exp(1j * per_block[..., 1])
    targets: list[Target] = list(range(spec.n_qubits)) + list(spec.pairs)
    channels = []
    for k, target in enumerate(targets):
        samples = np.repeat(amps[:, k], spec.samples_per_block)
        channels.append(DriveChannel(target, Envelope(samples, spec.dt), spec.rabi_rate))
    return PulseSchedule(spec.n_qubits, tuple(channels))
