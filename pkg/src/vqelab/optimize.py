"""Derivative-free trust-region minimizer built on linear interpolation.

This is Powell's COBYLA scheme with the constraint machinery removed. A
simplex of ``n + 1`` points defines a linear model of the objective; each
iteration either takes a step of length ``rho`` down the model gradient or,
when the simplex has become badly shaped, evaluates a point that restores its
geometry. ``rho`` starts at ``rhobeg`` and is halved whenever a trust step
fails to deliver a tenth of the predicted decrease on a well-shaped simplex,
until it reaches ``rhoend``.

Every objective evaluation counts towards ``max_iterations``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, TextIO

import numpy as np

from vqelab.errors import OptimizerError, ValidationError

# Powell's constants: simplex acceptability (alpha, beta), geometry step
# length (gamma) and vertex-distance penalty scale (delta)
_ALPHA = 0.25
_BETA = 2.1
_GAMMA = 0.5
_DELTA = 1.1
_GOOD_RATIO = 0.1
_MAX_COND = 1e14
# geometric quantities within this relative margin count as tied; the lowest
# index wins, so rounding noise cannot flip a vertex choice
_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class OptimizerConfig:
    max_iterations: int = 100
    rhobeg: float = 0.1
    rhoend: float = 1e-4

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be at least 1")
        if not 0 < self.rhoend < self.rhobeg:
            raise ValidationError("need 0 < rhoend < rhobeg")


@dataclass
class OptimizerResult:
    best_params: np.ndarray
    best_value: float
    iterations: int
    converged: bool
    history: list[tuple[np.ndarray, float]] = field(default_factory=list, repr=False)
    final_rho: float = math.nan


def _argmax(v: np.ndarray) -> int:
    top = float(np.max(v))
    return int(np.flatnonzero(v >= top - _TIE_RTOL * abs(top))[0])


def _argmin(v: np.ndarray) -> int:
    low = float(np.min(v))
    return int(np.flatnonzero(v <= low + _TIE_RTOL * abs(low))[0])


class _BudgetExhausted(Exception):
    pass


class _Evaluator:
    def __init__(self, objective, budget: int, trace: TextIO | None):
        self.objective = objective
        self.budget = budget
        self.trace = trace
        self.history: list[tuple[np.ndarray, float]] = []

    @property
    def count(self) -> int:
        return len(self.history)

    def __call__(self, x: np.ndarray) -> float:
        if self.count >= self.budget:
            raise _BudgetExhausted
        x = np.array(x, dtype=float)
        value = float(self.objective(x.copy()))
        if not math.isfinite(value):
            raise OptimizerError(
                f"objective returned {value} at evaluation {self.count + 1}, params={x.tolist()}"
            )
        self.history.append((x, value))
        if self.trace is not None:
            params = " ".join(repr(float(v)) for v in x)
            self.trace.write(f"{self.count} {value!r} {params}\n")
        return value


class _Simplex:
    """Pivot ``x0`` (best point) plus rows ``sim[j]`` = vertex j - x0."""

    def __init__(self, x0: np.ndarray, f0: float, sim: np.ndarray, fv: np.ndarray):
        self.x0 = x0
        self.f0 = f0
        self.sim = sim
        self.fv = fv

    def vertex(self, j: int) -> np.ndarray:
        return self.x0 + self.sim[j]

    def make_pivot(self, j: int):
        d = self.sim[j].copy()
        self.x0 = self.x0 + d
        self.sim -= d
        self.sim[j] = -d
        self.f0, self.fv[j] = self.fv[j], self.f0

    def promote_best(self):
        j = int(np.argmin(self.fv))
        if self.fv[j] < self.f0:
            self.make_pivot(j)

    def inverse(self) -> np.ndarray | None:
        if not np.all(np.isfinite(self.sim)) or np.linalg.cond(self.sim) > _MAX_COND:
            return None
        return np.linalg.inv(self.sim)


def _span(f: _Evaluator, x0: np.ndarray, f0: float, rho: float) -> _Simplex:
    n = x0.size
    sim = rho * np.eye(n)
    fv = np.empty(n)
    simplex = _Simplex(x0, f0, sim, fv)
    for j in range(n):
        fv[j] = math.inf
        fv[j] = f(x0 + sim[j])
    simplex.promote_best()
    return simplex


def minimize(
    objective: Callable[[np.ndarray], float],
    x0,
    cfg: OptimizerConfig = OptimizerConfig(),
    trace: TextIO | None = None,
) -> OptimizerResult:
    """Minimize ``objective`` starting from ``x0``.

    Args:
        objective: maps a parameter vector to a finite float.
        x0: starting point, at least one dimension.
        cfg: budget and trust-radius schedule.
        trace: optional text stream; one line ``index value p1 p2 ...`` is
            written per evaluation.

    Returns:
        OptimizerResult with ``iterations`` equal to the number of objective
        evaluations. ``converged`` is True when ``rho`` reached ``rhoend``
        before the budget ran out.

    Raises:
        OptimizerError: the objective returned NaN or infinity.
    """
    x0 = np.array(x0, dtype=float).reshape(-1)
    if x0.size < 1:
        raise ValidationError("x0 must have at least one entry")
    n = x0.size
    f = _Evaluator(objective, cfg.max_iterations, trace)
    rho = cfg.rhobeg
    converged = False
    simplex = None
    best_x, best_f = x0, math.inf
    try:
        best_f = f(x0)
        simplex = _span(f, x0, best_f, rho)
        while True:
            simi = simplex.inverse()
            if simi is None:
                simplex = _span(f, simplex.x0, simplex.f0, rho)
                continue
            grad = simi @ (simplex.fv - simplex.f0)
            gnorm = float(np.linalg.norm(grad))

            trust_ok = False
            if gnorm > 0:
                d = -rho * grad / gnorm
                predicted = rho * gnorm
                x_new = simplex.x0 + d
                f_new = f(x_new)
                ratio = (simplex.f0 - f_new) / predicted
                _replace_after_trust_step(simplex, simi, d, f_new, rho)
                trust_ok = ratio >= _GOOD_RATIO
            if trust_ok:
                continue

            simi = simplex.inverse()
            if simi is None:
                continue
            j = _bad_vertex(simplex.sim, simi, rho)
            if j is not None:
                _geometry_step(f, simplex, simi, j, rho, grad)
                continue
            if rho <= cfg.rhoend:
                converged = True
                break
            rho *= 0.5
            if rho <= 1.5 * cfg.rhoend:
                rho = cfg.rhoend
    except _BudgetExhausted:
        pass

    if f.history:
        # earliest evaluation attaining the minimum; equals the pivot except
        # when the budget ran out while the first simplex was being built
        best_x, best_f = min(f.history, key=lambda item: item[1])
    return OptimizerResult(
        best_params=np.array(best_x),
        best_value=float(best_f),
        iterations=f.count,
        converged=converged,
        history=f.history,
        final_rho=rho,
    )


def _replace_after_trust_step(simplex: _Simplex, simi, d, f_new, rho):
    lam = d @ simi
    edge = _DELTA * rho
    if f_new < simplex.f0:
        # the new point becomes the pivot, so the old pivot may be dropped too
        lam0 = 1.0 - lam.sum()
        dist = np.linalg.norm(simplex.sim - d, axis=1)
        weights = np.abs(lam) * np.maximum(1.0, (dist / edge) ** 2)
        w0 = abs(lam0) * max(1.0, (np.linalg.norm(d) / edge) ** 2)
        j = _argmax(weights)
        if w0 >= weights[j] * (1 - _TIE_RTOL):
            simplex.x0 = simplex.x0 + d
            simplex.sim -= d
            simplex.f0 = f_new
            return
        simplex.sim[j] = d
        simplex.fv[j] = f_new
        simplex.make_pivot(j)
        return
    dist = np.linalg.norm(simplex.sim, axis=1)
    weights = np.abs(lam) * np.maximum(1.0, (dist / edge) ** 2)
    j = _argmax(weights)
    if weights[j] > 0:
        simplex.sim[j] = d
        simplex.fv[j] = f_new


def _bad_vertex(sim, simi, rho) -> int | None:
    """Index of the vertex spoiling the simplex geometry, or None if acceptable."""
    veta = np.linalg.norm(sim, axis=1)
    vsig = 1.0 / np.linalg.norm(simi, axis=0)
    if np.max(veta) > _BETA * rho:
        return _argmax(veta)
    if np.min(vsig) < _ALPHA * rho:
        return _argmin(vsig)
    return None


def _geometry_step(f, simplex: _Simplex, simi, j, rho, grad):
    normal = simi[:, j]
    dx = _GAMMA * rho * normal / np.linalg.norm(normal)
    slope = float(grad @ dx)
    if abs(slope) <= _TIE_RTOL * np.linalg.norm(grad) * np.linalg.norm(dx):
        # the model is flat along dx; orient it by its largest component
        if dx[_argmax(np.abs(dx))] < 0:
            dx = -dx
    elif slope > 0:
        dx = -dx
    f_new = f(simplex.x0 + dx)
    simplex.sim[j] = dx
    simplex.fv[j] = f_new
    if f_new < simplex.f0:
        simplex.make_pivot(j)
