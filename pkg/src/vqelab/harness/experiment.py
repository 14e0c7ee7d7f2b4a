"""VQE runs at a single error angle and sweeps over a grid of angles."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

import numpy as np

from vqelab.errors import ConfigError, ValidationError
from vqelab.harness.metrics import SweepSummary, summarize
from vqelab.harness.records import RunRecord, build_records
from vqelab.measure import EstimatorMode, RotationError, estimate_energy
from vqelab.optimize import OptimizerConfig, minimize
from vqelab.pauli import (
    FermionHamiltonian,
    QubitHamiltonian,
    bundled_molecule,
    dense_matrix,
    exact_ground_energy,
    jordan_wigner,
    read_hamiltonian,
)
from vqelab.pulse import AnsatzSpec, build_ansatz, propagator
from vqelab.state import Statevector, zero_state

ANSATZ_PRESETS = ("excitation", "chain")
INIT_POLICIES = ("excitation", "constant", "uniform")
MODES = ("sampled", "analytic")

# occupied spin orbitals of the two-electron reference, and the virtual
# qubit that controls the paired excitation
_OCCUPIED = (0, 1)
_HUB = 2


def load_molecule(source: str | Path) -> QubitHamiltonian:
    """Read a molecule file, or a bundled fixture by name (``h2``, ``heh+``).

    Fermion-format files are mapped to qubits with Jordan-Wigner.
    """
    path = Path(source)
    if path.is_file():
        h = read_hamiltonian(path)
    else:
        try:
            h = bundled_molecule(str(source))
        except ValidationError:
            raise ConfigError(f"molecule {str(source)!r} is neither a file nor a bundled name") from None
    if isinstance(h, FermionHamiltonian):
        h = jordan_wigner(h)
    return h


def excitation_ansatz(n_qubits: int, **overrides) -> AnsatzSpec:
    """Star-coupled layout for a two-electron reference.

    Qubit 2 (the lowest virtual spin orbital) is coupled to every other qubit,
    which lets a rotation of qubit 2 be mapped onto a paired double excitation
    by the conditional flips of the second block.
    """
    if n_qubits <= _HUB:
        raise ConfigError(f"excitation ansatz needs at least {_HUB + 1} qubits")
    kw = dict(blocks=2, samples_per_block=32, dt=0.5, rabi_rate=0.2)
    kw.update(overrides)
    pairs = tuple((_HUB, q) for q in range(n_qubits) if q != _HUB)
    return AnsatzSpec(n_qubits, pairs=pairs, **kw)


def make_ansatz(preset: str, n_qubits: int, overrides: Mapping | None = None) -> AnsatzSpec:
    overrides = dict(overrides or {})
    if preset == "excitation":
        return excitation_ansatz(n_qubits, **overrides)
    if preset == "chain":
        return AnsatzSpec.linear_chain(n_qubits, **overrides)
    raise ConfigError(f"unknown ansatz preset {preset!r}; choose from {ANSATZ_PRESETS}")


def excitation_start(spec: AnsatzSpec) -> np.ndarray:
    """Parameters that prepare the Hartree-Fock determinant |1100...>.

    Block 0 applies pi pulses to the occupied qubits. Block 1 drives every
    non-hub qubit and its coupling to the hub with opposite phases so that the
    two cancel while the hub sits in |0>; once the optimizer rotates the hub,
    the same pulses flip the occupied and the partner virtual qubits together.
    """
    hubbed = {t for c, t in spec.pairs if c == _HUB}
    others = set(range(spec.n_qubits)) - {_HUB}
    if spec.blocks < 2 or hubbed != others:
        raise ConfigError("excitation start needs the excitation ansatz layout with >= 2 blocks")
    area = spec.rabi_rate * spec.block_duration
    m_pi, m_half = math.pi / area, math.pi / (2 * area)
    if m_pi > 1:
        raise ConfigError(f"block area {area:.3f} rad is too short for a pi pulse")
    theta = np.zeros((spec.blocks, spec.n_qubits + len(spec.pairs), 2))
    for q in _OCCUPIED:
        theta[0, q] = (m_pi, 0.0)
    for q in others:
        theta[1, q] = (m_half, math.pi)
    for k in range(len(spec.pairs)):
        theta[1, spec.n_qubits + k] = (m_half, 0.0)
    return theta.reshape(-1)


def initial_parameters(spec: AnsatzSpec, policy: str, seed: int = 0) -> np.ndarray:
    if policy == "excitation":
        return excitation_start(spec)
    if policy == "constant":
        return spec.initial_params(0.05, 0.0)
    if policy == "uniform":
        rng = np.random.default_rng(seed)
        theta = rng.uniform(-math.pi, math.pi, spec.n_params)
        mask = spec.magnitude_mask()
        theta[mask] = rng.uniform(0.0, 0.1, int(mask.sum()))
        return theta
    raise ConfigError(f"unknown initial-parameter policy {policy!r}; choose from {INIT_POLICIES}")


def ansatz_state(spec: AnsatzSpec, theta) -> Statevector:
    u = propagator(build_ansatz(spec, theta))
    return Statevector(spec.n_qubits, u[:, 0])


@dataclass(frozen=True)
class VQEOutcome:
    energy: float
    iterations: int
    best_params: np.ndarray = field(repr=False)
    exact_energy: float
    converged: bool


def run_vqe(
    h: QubitHamiltonian,
    spec: AnsatzSpec,
    err: RotationError,
    cfg: OptimizerConfig = OptimizerConfig(),
    seed: int = 0,
    mode: EstimatorMode = EstimatorMode.sampled(1024),
    theta0=None,
) -> VQEOutcome:
    """Minimize the estimated energy of the pulse ansatz applied to |0...0>.

    Evaluation ``k`` draws its shots from ``default_rng([seed, k])``, so a run
    is a deterministic function of its inputs. ``energy`` is the optimizer's
    best estimate; ``exact_energy`` re-evaluates ``<H>`` at the best
    parameters without shot noise or readout error.
    """
    if h.n_qubits != spec.n_qubits:
        raise ConfigError(f"{h.n_qubits}-qubit Hamiltonian with a {spec.n_qubits}-qubit ansatz")
    theta0 = spec.initial_params() if theta0 is None else np.asarray(theta0, dtype=float)
    count = 0

    def objective(theta):
        nonlocal count
        count += 1
        rng = None if mode.is_analytic else np.random.default_rng([seed, count])
        return estimate_energy(ansatz_state(spec, theta), h, err, mode, rng)

    res = minimize(objective, theta0, cfg)
    psi = ansatz_state(spec, res.best_params).amplitudes
    exact = float(np.vdot(psi, dense_matrix(h) @ psi).real)
    return VQEOutcome(res.best_value, res.iterations, res.best_params, exact, res.converged)


@dataclass(frozen=True)
class ExperimentConfig:
    molecule: str = "h2"
    ansatz: str = "excitation"
    ansatz_overrides: tuple[tuple[str, object], ...] = ()
    n_start: float = -15.0
    n_end: float = 15.0
    n_step: float = 0.5
    shots: int = 1024
    mode: str = "sampled"
    optimizer: OptimizerConfig = OptimizerConfig(max_iterations=100, rhobeg=0.1, rhoend=0.03)
    seed: int = 0
    init_policy: str | None = None
    inject_y: bool = False
    repeats: int = 1
    workers: int | None = None
    out_dir: str | None = None

    def __post_init__(self):
        if not self.n_step > 0:
            raise ConfigError("n_step must be positive")
        if self.n_start > self.n_end:
            raise ConfigError("n_start must not exceed n_end")
        if self.shots < 1:
            raise ConfigError("shots must be at least 1")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.ansatz not in ANSATZ_PRESETS:
            raise ConfigError(f"unknown ansatz preset {self.ansatz!r}; choose from {ANSATZ_PRESETS}")
        if self.init_policy is not None and self.init_policy not in INIT_POLICIES:
            raise ConfigError(f"unknown initial-parameter policy {self.init_policy!r}")
        if self.repeats < 1:
            raise ConfigError("repeats must be at least 1")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        object.__setattr__(self, "ansatz_overrides", tuple(dict(self.ansatz_overrides).items()))

    @property
    def policy(self) -> str:
        if self.init_policy is not None:
            return self.init_policy
        return "excitation" if self.ansatz == "excitation" else "constant"

    @property
    def estimator(self) -> EstimatorMode:
        return EstimatorMode.analytic() if self.mode == "analytic" else EstimatorMode.sampled(self.shots)

    def with_(self, **changes) -> ExperimentConfig:
        return replace(self, **changes)


def error_grid(cfg: ExperimentConfig) -> np.ndarray:
    """Angles ``n_start, n_start + n_step, ...`` up to ``n_end``; must contain 0."""
    count = int(math.floor((cfg.n_end - cfg.n_start) / cfg.n_step + 1e-9)) + 1
    grid = cfg.n_start + cfg.n_step * np.arange(count)
    grid[np.abs(grid) < 1e-9 * cfg.n_step] = 0.0
    grid = np.round(grid, 12) + 0.0
    if not np.any(grid == 0.0):
        raise ConfigError(f"grid {cfg.n_start}..{cfg.n_end} step {cfg.n_step} does not contain N = 0")
    return grid


def point_seed(master: int, index: int, repeat: int = 0) -> int:
    """Seed for grid point ``index``, derived from the master seed."""
    ss = np.random.SeedSequence(master, spawn_key=(index, repeat))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class SweepResult:
    config: ExperimentConfig
    e_fci: float
    records: list[RunRecord]
    summary: SweepSummary
    exact_energies: list[float]


def _run_point(job):
    h, spec, theta0, n, seeds, cfg = job
    err = RotationError(n, inject_y=cfg.inject_y)
    outs = [run_vqe(h, spec, err, cfg.optimizer, s, cfg.estimator, theta0) for s in seeds]
    return outs


def _default_workers(n_jobs: int) -> int:
    return max(1, min(n_jobs, os.cpu_count() or 1))


def sweep(cfg: ExperimentConfig, h: QubitHamiltonian | None = None) -> SweepResult:
    """One VQE run (or ``repeats`` averaged runs) per grid angle.

    Grid points run in worker processes; results are merged by grid index, so
    the output does not depend on the worker count.
    """
    h = load_molecule(cfg.molecule) if h is None else h
    e_fci = exact_ground_energy(h)
    spec = make_ansatz(cfg.ansatz, h.n_qubits, dict(cfg.ansatz_overrides))
    theta0 = initial_parameters(spec, cfg.policy, cfg.seed)
    grid = error_grid(cfg)
    seeds = [[point_seed(cfg.seed, i, r) for r in range(cfg.repeats)] for i in range(grid.size)]
    jobs = [(h, spec, theta0, float(n), seeds[i], cfg) for i, n in enumerate(grid)]
    workers = cfg.workers or _default_workers(len(jobs))
    if workers == 1:
        results = [_run_point(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_point, jobs))

    points = []
    exact = []
    for n, s, outs in zip(grid, seeds, results):
        energy = float(np.mean([o.energy for o in outs]))
        iters = float(np.mean([o.iterations for o in outs]))
        points.append((float(n), energy, iters, s[0]))
        exact.append(float(np.mean([o.exact_energy for o in outs])))
    records = build_records(points, e_fci)
    return SweepResult(cfg, e_fci, records, summarize(records), exact)
