"""Per-angle run records and their CSV / key-value persistence."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from vqelab.errors import MetricError, ParseError
from vqelab.harness.metrics import SweepSummary, accuracy, accuracy_deviation, iteration_deviation

CSV_HEADER = (
    "epsilon_deg",
    "energy_hartree",
    "iterations",
    "iteration_deviation",
    "accuracy_pct",
    "accuracy_deviation_pct",
    "seed",
)


@dataclass(frozen=True)
class RunRecord:
    epsilon_degrees: float
    energy: float
    iterations: float
    accuracy: float
    accuracy_deviation: float
    iteration_deviation: float
    seed: int

    def __post_init__(self):
        if self.accuracy > 100.0:
            raise MetricError(f"accuracy {self.accuracy} exceeds 100%")


def build_records(points: Iterable[tuple[float, float, float, int]], e_fci: float) -> list[RunRecord]:
    """Turn ``(N, energy, iterations, seed)`` tuples into records.

    Deviations are taken against the N = 0 point of the same list.
    """
    points = list(points)
    base = [p for p in points if p[0] == 0]
    if not base:
        raise MetricError("missing baseline record (no N = 0 run)")
    acc0 = accuracy(base[0][1], e_fci)
    it0 = base[0][2]
    out = []
    for n, energy, iters, seed in points:
        acc = accuracy(energy, e_fci)
        out.append(
            RunRecord(
                epsilon_degrees=float(n),
                energy=float(energy),
                iterations=iters,
                accuracy=acc,
                accuracy_deviation=accuracy_deviation(acc, acc0),
                iteration_deviation=iteration_deviation(iters, it0),
                seed=int(seed),
            )
        )
    return out


def _fmt_count(x) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


def records_csv(records: Iterable[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(
            [
                repr(r.epsilon_degrees),
                repr(r.energy),
                _fmt_count(r.iterations),
                repr(r.iteration_deviation),
                f"{r.accuracy:.5f}",
                repr(r.accuracy_deviation),
                str(r.seed),
            ]
        )
    return buf.getvalue()


def parse_records_csv(text: str) -> list[RunRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ParseError("unexpected CSV header", 1)
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise ParseError(f"expected {len(CSV_HEADER)} fields, got {len(row)}", lineno)
        try:
            n, e, it, itd, acc, accd, seed = row
            out.append(RunRecord(float(n), float(e), float(it), float(acc), float(accd), float(itd), int(seed)))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return out


def summary_text(summary: SweepSummary, meta: Mapping[str, object] = ()) -> str:
    lines = [f"{k} = {v}" for k, v in dict(meta).items()]
    lines += [f"{k} = {v!r}" for k, v in summary.as_dict().items()]
    return "\n".join(lines) + "\n"


def parse_summary(text: str) -> dict[str, object]:
    out: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError("expected 'key = value'", lineno)
        value = value.strip()
        try:
            out[key.strip()] = int(value)
        except ValueError:
            try:
                out[key.strip()] = float(value)
            except ValueError:
                out[key.strip()] = value
    return out


def _write(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def write_records(
    records: Iterable[RunRecord],
    summary: SweepSummary | None,
    path: str | Path,
    meta: Mapping[str, object] = (),
) -> tuple[Path, Path | None]:
    """Write ``records.csv`` and (if given) ``summary.txt`` into directory ``path``."""
    out = Path(path)
    csv_path = out / "records.csv"
    _write(csv_path, records_csv(records))
    if summary is None:
        return csv_path, None
    summary_path = out / "summary.txt"
    _write(summary_path, summary_text(summary, meta))
    return csv_path, summary_path


def _read(path: Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


def read_records(path: str | Path) -> list[RunRecord]:
    return parse_records_csv(_read(Path(path)))


def read_summary(path: str | Path) -> dict[str, object]:
    return parse_summary(_read(Path(path)))

