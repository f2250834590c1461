"""Shapley value estimation via kernel-weighted least squares."""

from __future__ import annotations

from math import comb
from typing import Optional

import numpy as np

from .. import rng as rngmod
from ..models.families import Model, predicted_class
from .base import Explanation, ExplainerError
from .config import KernelShapConfig

_MAX_REDRAWS = 10
_EXHAUSTIVE_LIMIT = 20  # 2^20 coalition cap


def shapley_kernel_weight(d: int, s: int) -> float:
    """Regression weight of a coalition of size s among d features."""
    if not 0 < s < d:
        raise ExplainerError("kernel weight defined only for proper nonempty coalitions")
    return (d - 1) / (comb(d, s) * s * (d - s))


def _all_interior_masks(d: int) -> np.ndarray:
    codes = np.arange(1, 2**d - 1, dtype=np.uint64)
    return ((codes[:, None] >> np.arange(d, dtype=np.uint64)) & 1).astype(np.float64)


def _sample_masks(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform coalitions with 0 < |S| < d; all-identical batches redrawn."""
    for _ in range(_MAX_REDRAWS):
        masks = (rng.random((count, d)) < 0.5).astype(np.float64)
        sizes = masks.sum(axis=1)
        bad = (sizes == 0) | (sizes == d)
        for _ in range(_MAX_REDRAWS):
            if not bad.any():
                break
            masks[bad] = (rng.random((int(bad.sum()), d)) < 0.5).astype(np.float64)
            sizes = masks.sum(axis=1)
            bad = (sizes == 0) | (sizes == d)
        if bad.any():
            continue
        if count > 1 and (masks == masks[0]).all():
            continue  # degenerate draw: every coalition identical
        return masks
    raise ExplainerError("could not draw a usable coalition sample")


def explain_kernel_shap(
    model: Model,
    x: np.ndarray,
    cfg: KernelShapConfig,
    baseline: np.ndarray,
    seed: int,
    instance_id: Optional[int] = None,
) -> Explanation:
    """Attribute the predicted-class probability by approximate Shapley values.

    Coalition value: prediction at x with out-of-coalition features swapped
    for the baseline. The empty and full coalitions are pinned with a large
    anchor weight so the fit honors local accuracy.
    """
    x = np.asarray(x, dtype=np.float64)
    d = x.size
    if d < 1:
        raise ExplainerError("need at least one feature")
    baseline = np.asarray(baseline, dtype=np.float64)
    if baseline.shape != x.shape:
        raise ExplainerError(f"baseline shape {baseline.shape} != input shape {x.shape}")
    cls = predicted_class(model, x)

    n_interior = 2**d - 2
    if cfg.exhaustive and d > _EXHAUSTIVE_LIMIT:
        raise ExplainerError(f"exhaustive enumeration infeasible for d={d}")
    if d == 1:
        masks = np.empty((0, 1))
    elif cfg.exhaustive or n_interior <= cfg.subset_size:
        masks = _all_interior_masks(d)
    else:
        masks = _sample_masks(d, cfg.subset_size, rngmod.stream(seed, "kernel-shap"))

    sizes = masks.sum(axis=1).astype(int)
    weights = np.array([shapley_kernel_weight(d, s) for s in sizes])
    masks = np.vstack([np.zeros(d), np.ones(d), masks])
    weights = np.concatenate([[cfg.anchor_weight, cfg.anchor_weight], weights])

    points = masks * x + (1.0 - masks) * baseline
    values = model.predict_proba(points)[:, cls]

    A = np.hstack([masks, np.ones((masks.shape[0], 1))])
    sw = np.sqrt(weights)[:, None]
    beta, *_ = np.linalg.lstsq(A * sw, values * sw[:, 0], rcond=None)
    return Explanation(beta[:d], "kernel_shap", instance_id, seed)
