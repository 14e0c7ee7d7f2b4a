"""SVG plots of accuracy and iteration deviation against the error angle."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from vqelab.errors import ValidationError  # noqa: E402

# fixed hash salt and no date keep the SVG output byte-stable
_SVG_META = {"Date": None}
plt.rcParams["svg.hashsalt"] = "vqelab"


def _plot(x, y, ylabel: str, title: str, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(x, y, marker="o", markersize=3, linewidth=1, gid="series")
    ax.axhline(0.0, color="0.6", linewidth=0.6)
    ax.set_xlabel("rotation error N (degrees)")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)
    return path


def emit_plots(records: Sequence, path: str | Path, label: str = "") -> tuple[Path, Path]:
    """Write ``accuracy_deviation.svg`` and ``iteration_deviation.svg`` into ``path``."""
    records = sorted(records, key=lambda r: r.epsilon_degrees)
    if not records:
        raise ValidationError("nothing to plot: empty record list")
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    n = [r.epsilon_degrees for r in records]
    prefix = f"{label}: " if label else ""
    acc = _plot(
        n,
        [r.accuracy_deviation for r in records],
        "accuracy deviation (percentage points)",
        prefix + "accuracy deviation",
        out / "accuracy_deviation.svg",
    )
    it = _plot(
        n,
        [100.0 * r.iteration_deviation for r in records],
        "iteration deviation (%)",
        prefix + "iteration deviation",
        out / "iteration_deviation.svg",
    )
    return acc, it
