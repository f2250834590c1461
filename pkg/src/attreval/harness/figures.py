"""Bar-chart renderings of leaderboard tables, one figure per metric group."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .leaderboard import DISPLAY_NAMES, LeaderboardTable

_GROUPS = {
    "agreement": ("FA", "RA", "SA", "SRA", "RC", "PRA"),
    "prediction_gap": ("PGI", "PGU"),
    "stability": ("RIS", "RRS", "ROS"),
    "fairness": tuple(
        f"{m}_disp" for m in ("FA", "RA", "SA", "SRA", "RC", "PRA", "PGI", "PGU", "RIS", "RRS", "ROS")
    ),
}


def _plot_group(table: LeaderboardTable, metrics: list[str], title: str, path: Path) -> bool:
    means = np.full((len(table.methods), len(metrics)), np.nan)
    errs = np.zeros_like(means)
    for i, method in enumerate(table.methods):
        for j, metric in enumerate(metrics):
            cell = table.cell(method, metric)
            if cell and not cell.get("undefined") and cell.get("mean") is not None:
                means[i, j] = cell["mean"]
                errs[i, j] = cell.get("stderr") or 0.0
    if np.isnan(means).all():
        return False

    fig, ax = plt.subplots(figsize=(max(6.0, 1.6 * len(metrics)), 4.0))
    width = 0.8 / len(table.methods)
    xs = np.arange(len(metrics))
    for i, method in enumerate(table.methods):
        offset = (i - (len(table.methods) - 1) / 2) * width
        ax.bar(
            xs + offset,
            np.nan_to_num(means[i]),
            width=width,
            yerr=errs[i],
            capsize=2,
            label=DISPLAY_NAMES.get(method, method),
        )
    ax.set_xticks(xs)
    ax.set_xticklabels([m.replace("_disp", " disparity") for m in metrics], rotation=20, ha="right")
    ax.set_title(title)
    ax.legend(fontsize=7, ncol=2)
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return True


def render_figures(tables: list[LeaderboardTable], fig_dir) -> list[Path]:
    """PNG per (model, metric group); skips groups with no defined cells."""
    fig_dir = Path(fig_dir)
    fig_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for table in tables:
        for group, members in _GROUPS.items():
            metrics = [m for m in table.metrics if m in members]
            if not metrics:
                continue
            path = fig_dir / f"{table.model}_{group}.png"
            title = f"{table.dataset} / {table.model}: {group.replace('_', ' ')}"
            if _plot_group(table, metrics, title, path):
                written.append(path)
    return written
