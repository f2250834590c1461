"""Prediction-gap faithfulness: how much the prediction moves when the
features an explanation calls important (PGI) or unimportant (PGU) are
perturbed."""

from __future__ import annotations

import numpy as np

from .. import rng as rngmod
from ..datasets.schema import FeatureSchema
from ..models.families import Model, predicted_class
from .agreement import MetricError, auc_over_k, magnitude_order
from .perturbations import PerturbationConfig, perturb_batch

PGI = "PGI"
PGU = "PGU"
GAP_MODES = (PGI, PGU)


def _gap_at_k(model, x, order, k, mode, schema, cfg, rng) -> float:
    perturb_idx = order[:k] if mode == PGI else order[k:]
    pts = perturb_batch(x, perturb_idx, schema, cfg, rng, cfg.n_perturbations)
    cls = predicted_class(model, x)
    y_hat = model.predict_proba(x)[cls]
    probs = model.predict_proba(pts)[:, cls]
    return float(np.mean(np.abs(y_hat - probs)))


def prediction_gap(
    model: Model,
    x: np.ndarray,
    e: np.ndarray,
    k: int,
    mode: str,
    schema: list[FeatureSchema],
    cfg: PerturbationConfig,
    seed: int,
) -> float:
    """Monte-Carlo E[|y_hat - f(x')|] at a single k."""
    x = np.asarray(x, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    if mode not in GAP_MODES:
        raise MetricError(f"unknown prediction-gap mode {mode!r}")
    if not 1 <= k <= x.size:
        raise MetricError(f"k must be in 1..{x.size}")
    order = magnitude_order(e)
    rng = rngmod.stream(seed, mode, k)
    return _gap_at_k(model, x, order, k, mode, schema, cfg, rng)


def prediction_gap_curve(
    model: Model,
    x: np.ndarray,
    e: np.ndarray,
    mode: str,
    schema: list[FeatureSchema],
    cfg: PerturbationConfig,
    seed: int,
) -> np.ndarray:
    """Gap at every k = 1..d; the reported value is this curve's AUC."""
    x = np.asarray(x, dtype=np.float64)
    if mode not in GAP_MODES:
        raise MetricError(f"unknown prediction-gap mode {mode!r}")
    order = magnitude_order(np.asarray(e, dtype=np.float64))
    d = x.size
    cls = predicted_class(model, x)
    y_hat = model.predict_proba(x)[cls]
    # one batched predict over all (k, perturbation) pairs
    batches = []
    for k in range(1, d + 1):
        perturb_idx = order[:k] if mode == PGI else order[k:]
        rng = rngmod.stream(seed, mode, k)
        batches.append(perturb_batch(x, perturb_idx, schema, cfg, rng, cfg.n_perturbations))
    probs = model.predict_proba(np.vstack(batches))[:, cls]
    gaps = np.abs(y_hat - probs).reshape(d, cfg.n_perturbations)
    return gaps.mean(axis=1)


def prediction_gap_auc(
    model: Model,
    x: np.ndarray,
    e: np.ndarray,
    mode: str,
    schema: list[FeatureSchema],
    cfg: PerturbationConfig,
    seed: int,
) -> float:
    return auc_over_k(prediction_gap_curve(model, x, e, mode, schema, cfg, seed))
