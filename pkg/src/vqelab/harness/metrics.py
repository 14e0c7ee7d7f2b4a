"""Accuracy and iteration metrics for error sweeps, and their summary statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from vqelab.errors import MetricError


def accuracy(e_vqe: float, e_fci: float) -> float:
    """Percent agreement ``100 * (1 - |(e_vqe - e_fci) / e_fci|)``."""
    if e_fci == 0:
        raise MetricError("accuracy is undefined for a zero reference energy")
    return 100.0 * (1.0 - abs((e_vqe - e_fci) / e_fci))


def _value(x, attr):
    if x is None:
        raise MetricError("missing baseline record (no N = 0 run)")
    return getattr(x, attr) if hasattr(x, attr) else x


def accuracy_deviation(record, baseline) -> float:
    """Accuracy(N) - Accuracy(0), in percentage points.

    Accepts ``RunRecord`` objects or plain accuracy values.
    """
    return _value(record, "accuracy") - _value(baseline, "accuracy")


def iteration_deviation(record, baseline) -> float:
    """Relative change ``(Iter(N) - Iter(0)) / Iter(0)`` as a fraction."""
    it0 = _value(baseline, "iterations")
    if it0 <= 0:
        raise MetricError("baseline iteration count must be positive")
    return (_value(record, "iterations") - it0) / it0


def signed_extreme(values: Sequence[float]) -> float:
    """Entry with the largest magnitude, sign kept (first one on ties)."""
    values = list(values)
    if not values:
        return math.nan
    return max(values, key=abs)


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation; NaN when undefined (fewer than two points or no spread)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or np.ptp(x) == 0 or np.ptp(y) == 0:
        return math.nan
    xc, yc = x - x.mean(), y - y.mean()
    return float(xc @ yc / math.sqrt((xc @ xc) * (yc @ yc)))


@dataclass(frozen=True)
class SweepSummary:
    accuracy_at_zero: float
    average_accuracy: float
    max_accuracy_deviation: float
    iteration_deviation_mean: float
    iteration_deviation_std: float
    iteration_deviation_max: float
    correlation_positive: float
    correlation_negative: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def summarize(records) -> SweepSummary:
    """Aggregate statistics of a sweep.

    The standard deviation is the population value (ddof=0). The positive
    branch correlates N with iteration deviation over N > 0, the negative
    branch correlates |N| with iteration deviation over N < 0; N = 0 belongs to
    neither.
    """
    records = list(records)
    if not records:
        raise MetricError("cannot summarize an empty sweep")
    baseline = [r for r in records if r.epsilon_degrees == 0]
    if not baseline:
        raise MetricError("missing baseline record (no N = 0 run)")
    acc = np.array([r.accuracy for r in records])
    acc_dev = [r.accuracy_deviation for r in records]
    it_dev = np.array([r.iteration_deviation for r in records])
    pos = [(r.epsilon_degrees, r.iteration_deviation) for r in records if r.epsilon_degrees > 0]
    neg = [(-r.epsilon_degrees, r.iteration_deviation) for r in records if r.epsilon_degrees < 0]
    return SweepSummary(
        accuracy_at_zero=baseline[0].accuracy,
        average_accuracy=float(acc.mean()),
        max_accuracy_deviation=signed_extreme(acc_dev),
        iteration_deviation_mean=float(it_dev.mean()),
        iteration_deviation_std=float(it_dev.std()),
        iteration_deviation_max=signed_extreme(it_dev.tolist()),
        correlation_positive=pearson(*zip(*pos)) if len(pos) >= 2 else math.nan,
        correlation_negative=pearson(*zip(*neg)) if len(neg) >= 2 else math.nan,
    )
