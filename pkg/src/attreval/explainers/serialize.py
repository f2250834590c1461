"""Persist explanations as CSV or JSON lines with round-trip-exact decimals."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .base import Explanation


def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(path, explanations: Iterable[Explanation], feature_names: Optional[list[str]] = None) -> Path:
    path = Path(path)
    explanations = list(explanations)
    if not explanations:
        raise ValueError("nothing to write")
    d = explanations[0].dim
    names = feature_names or [f"f{j}" for j in range(d)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["instance_id", "method", "seed"] + list(names))
        for e in explanations:
            writer.writerow(
                [e.instance_id if e.instance_id is not None else "",
                 e.method,
                 e.seed if e.seed is not None else ""]
                + [_fmt17(v) for v in e.attributions]
            )
    return path


def read_csv(path) -> list[Explanation]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)  # header
        for row in reader:
            out.append(
                Explanation(
                    attributions=np.array([float(v) for v in row[3:]]),
                    method=row[1],
                    instance_id=int(row[0]) if row[0] else None,
                    seed=int(row[2]) if row[2] else None,
                )
            )
    return out


def write_jsonl(path, explanations: Iterable[Explanation]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for e in explanations:
            doc = {
                "instance_id": e.instance_id,
                "method": e.method,
                "seed": e.seed,
                "attributions": [_fmt17(v) for v in e.attributions],
            }
            fh.write(json.dumps(doc, sort_keys=True) + "\n")
    return path


def read_jsonl(path) -> list[Explanation]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            doc = json.loads(line)
            out.append(
                Explanation(
                    attributions=np.array([float(v) for v in doc["attributions"]]),
                    method=doc["method"],
                    instance_id=doc["instance_id"],
                    seed=doc["seed"],
                )
            )
    return out
