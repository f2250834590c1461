"""Leaderboard assembly and rendering to markdown / CSV / JSON."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

DISPLAY_NAMES = {
    "random": "Random",
    "vanilla_grad": "VanillaGrad",
    "grad_x_input": "GradientXInput",
    "smoothgrad": "SmoothGrad",
    "integrated_gradients": "IntegratedGrad",
    "lime": "LIME",
    "kernel_shap": "SHAP",
}

# up: higher is better; down: lower is better; zero: |value| closest to zero wins
_UP = {"FA", "RA", "SA", "SRA", "RC", "PRA", "PGI"}
_ZERO = {"RIS", "RRS", "ROS"}


def metric_direction(metric: str) -> str:
    if metric.endswith("_disp"):
        return "down"
    if metric in _UP:
        return "up"
    if metric in _ZERO:
        return "zero"
    return "down"  # PGU


def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class LeaderboardTable:
    """Methods x metrics grid of aggregated results for one model run."""

    dataset: str
    model: str
    methods: list[str]
    metrics: list[str]
    cells: dict[str, dict] = field(default_factory=dict)  # "method|metric" -> cell dict
    metadata: dict = field(default_factory=dict)

    @staticmethod
    def key(method: str, metric: str) -> str:
        return f"{method}|{metric}"

    def cell(self, method: str, metric: str) -> Optional[dict]:
        return self.cells.get(self.key(method, metric))

    def set_cell(self, method: str, metric: str, cell: dict) -> None:
        self.cells[self.key(method, metric)] = cell

    def validate(self) -> None:
        missing = [
            (m, k)
            for m in self.methods
            for k in self.metrics
            if self.cell(m, k) is None
        ]
        if missing:
            raise ValueError(f"leaderboard has unpopulated cells: {missing[:5]}")

    def best_methods(self, metric: str) -> set[str]:
        direction = metric_direction(metric)
        scored = []
        for m in self.methods:
            cell = self.cell(m, metric)
            if cell is None or cell.get("undefined"):
                continue
            v = cell["mean"]
            if v is None or (isinstance(v, float) and math.isnan(v)):
                continue
            scored.append((m, v))
        if not scored:
            return set()
        if direction == "up":
            target = max(v for _, v in scored)
        elif direction == "down":
            target = min(v for _, v in scored)
        else:
            target = min((v for _, v in scored), key=abs)
        return {m for m, v in scored if v == target}

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "model": self.model,
            "methods": list(self.methods),
            "metrics": list(self.metrics),
            "cells": self.cells,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "LeaderboardTable":
        return cls(
            dataset=doc["dataset"],
            model=doc["model"],
            methods=list(doc["methods"]),
            metrics=list(doc["metrics"]),
            cells=dict(doc["cells"]),
            metadata=dict(doc.get("metadata", {})),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, LeaderboardTable):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def _cell_text(cell: dict) -> str:
    if cell.get("undefined"):
        return "n/a"
    mean = cell["mean"]
    if mean is None or (isinstance(mean, float) and math.isnan(mean)):
        return "n/a"
    if cell.get("stderr") is None:
        return f"{mean:.3f}"
    return f"{mean:.3f} ± {cell['stderr']:.3f}"


def render_markdown(table: LeaderboardTable) -> str:
    arrows = {"up": "↑", "down": "↓", "zero": "→0"}
    lines = [f"## {table.dataset} / {table.model}", ""]
    header = ["Method"] + [f"{m} ({arrows[metric_direction(m)]})" for m in table.metrics]
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "|".join(["---"] * len(header)) + "|")
    for method in table.methods:
        best = {metric for metric in table.metrics if method in table.best_methods(metric)}
        row = [DISPLAY_NAMES.get(method, method)]
        for metric in table.metrics:
            cell = table.cell(method, metric)
            text = _cell_text(cell) if cell else "n/a"
            row.append(f"**{text}**" if metric in best and text != "n/a" else text)
        lines.append("| " + " | ".join(row) + " |")
    lines.append("")
    return "\n".join(lines)


_CSV_FIELDS = [
    "model",
    "method",
    "metric",
    "mean",
    "stderr",
    "n",
    "n_undefined",
    "mean_major",
    "mean_minor",
    "undefined_reason",
]


def _csv_rows(table: LeaderboardTable):
    for method in table.methods:
        for metric in table.metrics:
            cell = table.cell(method, metric) or {"undefined": "missing"}
            row = {
                "model": table.model,
                "method": method,
                "metric": metric,
                "mean": "",
                "stderr": "",
                "n": cell.get("n", ""),
                "n_undefined": cell.get("n_undefined", ""),
                "mean_major": "",
                "mean_minor": "",
                "undefined_reason": cell.get("undefined", ""),
            }
            if not cell.get("undefined"):
                row["mean"] = _fmt17(cell["mean"])
                if cell.get("stderr") is not None:
                    row["stderr"] = _fmt17(cell["stderr"])
                if cell.get("mean_major") is not None:
                    row["mean_major"] = _fmt17(cell["mean_major"])
                if cell.get("mean_minor") is not None:
                    row["mean_minor"] = _fmt17(cell["mean_minor"])
            yield row


def render_csv(tables: list[LeaderboardTable]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for table in tables:
        for row in _csv_rows(table):
            writer.writerow(row)
    return buf.getvalue()


def render_json(tables: list[LeaderboardTable]) -> str:
    return json.dumps({"tables": [t.to_dict() for t in tables]}, indent=1, sort_keys=True)


def parse_json(text: str) -> list[LeaderboardTable]:
    doc = json.loads(text)
    return [LeaderboardTable.from_dict(t) for t in doc["tables"]]


def emit_leaderboard(table: LeaderboardTable, fmt: str, path) -> Path:
    """Write one table in the requested format; returns the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.validate()
    if fmt == "markdown":
        path.write_text(render_markdown(table), encoding="utf-8")
    elif fmt == "csv":
        path.write_text(render_csv([table]), encoding="utf-8")
    elif fmt == "json":
        path.write_text(render_json([table]), encoding="utf-8")
    else:
        raise ValueError(f"unknown leaderboard format {fmt!r}")
    return path
