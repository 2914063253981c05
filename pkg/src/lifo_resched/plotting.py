"""Four-panel stack-size figures (gap, moves, max stack, mean stack vs S)."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

PANELS = (
    ("mean_gap", "gap"),
    ("mean_moves", "number of moves"),
    ("mean_max_stack", "maximum stack utilization"),
    ("mean_avg_stack", "average stack utilization"),
)
GAP_LABELS = {
    "twct": "gap to WSPT [%]",
    "lmax": "(Lmax - EDD) / P",
    "numlate": "late jobs above Moore-Hodgson",
    "wlate": "late weight above Lawler-Moore",
}


def plot_objective(summary: Sequence[dict], objective: str, path: str | Path) -> Path:
    """Draw one figure per objective from :func:`bench.summarize` rows, one line per n."""
    rows = [r for r in summary if r["objective"] == objective]
    if not rows:
        raise ValueError(f"no summary rows for objective {objective!r}")
    path = Path(path)
    with plt.rc_context({"svg.hashsalt": "lifo-resched", "svg.fonttype": "none"}):
        fig, axes = plt.subplots(2, 2, figsize=(9, 6.5), sharex=True)
        for ax, (key, label) in zip(axes.flat, PANELS):
            for n in sorted({r["n"] for r in rows}):
                series = sorted((r for r in rows if r["n"] == n), key=lambda r: r["S"])
                ax.plot([r["S"] for r in series], [r[key] for r in series], marker="o", ms=3, label=f"n={n}")
            ax.set_ylabel(GAP_LABELS.get(objective, label) if key == "mean_gap" else label)
            ax.grid(True, lw=0.3, alpha=0.6)
        for ax in axes[1]:
            ax.set_xlabel("stack size S")
        axes[0, 0].legend(frameon=False)
        fig.suptitle(f"{objective}: effect of the stack size")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path


def plot_study(summary: Sequence[dict], out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    objectives = sorted({r["objective"] for r in summary})
    return [plot_objective(summary, obj, out_dir / f"{obj}.svg") for obj in objectives]


def read_summary(path: str | Path) -> list[dict]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rec = {k: float(v) for k, v in row.items() if k.startswith("mean_")}
            rec.update(objective=row["objective"], n=int(row["n"]), S=int(row["S"]), count=int(row["count"]))
            out.append(rec)
    return out
