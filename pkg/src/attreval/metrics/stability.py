"""Relative stability: worst-case explanation change over a neighborhood,
normalized by how much the input (RIS), the model's internal
representation (RRS), or the output probabilities (ROS) changed.

Raw max ratios span orders of magnitude, so results are reported on a
natural-log scale. Instances with no same-prediction neighbor yield NaN,
which aggregation excludes and counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import rng as rngmod
from ..datasets.schema import FeatureSchema
from ..models.families import Model, predicted_class
from .agreement import MetricError
from .perturbations import PerturbationConfig, perturb_batch

RIS = "RIS"
RRS = "RRS"
ROS = "ROS"
STABILITY_MODES = (RIS, RRS, ROS)

# explain(point, draw_index) -> attribution vector; draw_index -1 is the base x
ExplainAt = Callable[[np.ndarray, int], np.ndarray]


@dataclass
class StabilityConfig:
    p: float = 2.0
    eps_min: float = 1e-6
    eps_num: float = 1e-12
    n_neighbors: int = 100

    def __post_init__(self):
        if self.p < 1:
            raise MetricError("p-norm order must be >= 1")
        if self.eps_min <= 0 or self.eps_num <= 0:
            raise MetricError("epsilons must be positive")
        if self.n_neighbors < 1:
            raise MetricError("need n_neighbors >= 1")


def percent_change(new: np.ndarray, base: np.ndarray, eps: float) -> np.ndarray:
    """(base - new) / base with sign-preserving clamping of tiny denominators."""
    base = np.asarray(base, dtype=np.float64)
    sign = np.where(base < 0, -1.0, 1.0)
    denom = np.where(np.abs(base) < eps, sign * eps, base)
    return (base - np.asarray(new, dtype=np.float64)) / denom


def relative_stability_all(
    model: Model,
    x: np.ndarray,
    explain: ExplainAt,
    schema: list[FeatureSchema],
    scfg: StabilityConfig,
    pcfg: PerturbationConfig,
    seed: int,
) -> tuple[dict[str, float], int]:
    """All three stability modes from one shared neighborhood sample.

    Each surviving neighbor is processed with single-row model calls so a
    scalar recomputation of the formula reproduces the result exactly
    (batched GEMMs round differently once percent changes cancel).

    Returns ({mode: ln max-ratio or NaN}, surviving-neighbor count).
    """
    x = np.asarray(x, dtype=np.float64)
    d = x.size
    rng = rngmod.stream(seed, "stability-neighborhood")
    neighbors = perturb_batch(x, np.arange(d), schema, pcfg, rng, scfg.n_neighbors)

    cls = predicted_class(model, x)
    keep = np.asarray(model.predict_proba(neighbors).argmax(axis=1) == cls)
    n_kept = int(keep.sum())
    if n_kept == 0:
        return {m: float("nan") for m in STABILITY_MODES}, 0

    e_x = np.asarray(explain(x, -1), dtype=np.float64)
    repr_x = np.asarray(model.representation(x))
    proba_x = np.asarray(model.predict_proba(x))

    best = {m: -np.inf for m in STABILITY_MODES}
    for j in np.flatnonzero(keep):
        xp = neighbors[int(j)]
        e_xp = np.asarray(explain(xp, int(j)), dtype=np.float64)
        num = float(np.linalg.norm(percent_change(e_xp, e_x, scfg.eps_num), scfg.p))
        dens = {
            RIS: percent_change(xp, x, scfg.eps_num),
            RRS: percent_change(model.representation(xp), repr_x, scfg.eps_num),
            ROS: percent_change(model.predict_proba(xp), proba_x, scfg.eps_num),
        }
        for mode, pc in dens.items():
            den = float(np.linalg.norm(pc, scfg.p))
            best[mode] = max(best[mode], num / max(den, scfg.eps_min))
    return {m: float(np.log(max(best[m], scfg.eps_num))) for m in STABILITY_MODES}, n_kept


def relative_stability(
    model: Model,
    x: np.ndarray,
    explain: ExplainAt,
    mode: str,
    schema: list[FeatureSchema],
    scfg: StabilityConfig,
    pcfg: PerturbationConfig,
    seed: int,
) -> float:
    """Single-mode stability; NaN when no neighbor keeps the prediction."""
    if mode not in STABILITY_MODES:
        raise MetricError(f"unknown stability mode {mode!r}")
    values, _ = relative_stability_all(model, x, explain, schema, scfg, pcfg, seed)
    return values[mode]
