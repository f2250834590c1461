"""Aggregation of per-instance scores and subgroup disparity."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .agreement import MetricError


@dataclass
class MetricResult:
    """Per-instance scores with their mean and standard error.

    NaN entries mark instances where the metric was undefined; they are
    excluded from the aggregate and tallied in n_undefined.
    """

    values: np.ndarray
    mean: float = field(init=False)
    stderr: float = field(init=False)
    n: int = field(init=False)
    n_undefined: int = field(init=False)
    subgroup: Optional[dict] = None  # {"mean_major", "mean_minor", "disparity"}

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if v.size == 0:
            raise MetricError("cannot aggregate zero scores")
        self.values = v
        valid = v[~np.isnan(v)]
        self.n = int(valid.size)
        self.n_undefined = int(v.size - valid.size)
        if self.n == 0:
            self.mean = float("nan")
            self.stderr = float("nan")
        else:
            self.mean = float(valid.mean())
            self.stderr = float(valid.std(ddof=1) / np.sqrt(self.n)) if self.n > 1 else 0.0

    @property
    def defined(self) -> bool:
        return self.n > 0


def aggregate(values) -> MetricResult:
    return MetricResult(values=np.asarray(values, dtype=np.float64))


def subgroup_disparity(values, protected) -> tuple[float, float, float]:
    """(majority mean, minority mean, |difference|) over a binary split.

    Majority is the larger group; on equal sizes the group with protected
    value 0 counts as the majority.
    """
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    g = np.asarray(protected).reshape(-1)
    if v.size != g.size:
        raise MetricError("scores and protected values must align")
    if not np.isin(g, (0, 1)).all():
        raise MetricError("protected values must be binary 0/1")
    v0, v1 = v[g == 0], v[g == 1]
    v0, v1 = v0[~np.isnan(v0)], v1[~np.isnan(v1)]
    if v0.size == 0 or v1.size == 0:
        raise MetricError("both subgroups must be nonempty")
    major, minor = (v0, v1) if v0.size >= v1.size else (v1, v0)
    mean_major, mean_minor = float(major.mean()), float(minor.mean())
    return mean_major, mean_minor, abs(mean_major - mean_minor)


def with_subgroups(result: MetricResult, protected) -> MetricResult:
    mean_major, mean_minor, disparity = subgroup_disparity(result.values, protected)
    result.subgroup = {
        "mean_major": mean_major,
        "mean_minor": mean_minor,
        "disparity": disparity,
    }
    return result
