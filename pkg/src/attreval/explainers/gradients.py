"""Gradient-family explainers plus the random baseline."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .. import rng as rngmod
from ..models.families import Model, predicted_class
from .base import Explanation, ExplainerError
from .config import GradConfig, IntegratedGradientsConfig, SmoothGradConfig


def explain_random(d: int, seed: int, instance_id: Optional[int] = None) -> Explanation:
    """Uniform(-1, 1) importances; the sanity-check baseline."""
    if d < 1:
        raise ExplainerError("need d >= 1")
    a = 2.0 * rngmod.stream(seed, "random-explainer").random(d) - 1.0
    return Explanation(a, "random", instance_id, seed)


def explain_vanilla_gradient(
    model: Model,
    x: np.ndarray,
    cfg: GradConfig = GradConfig(),
    instance_id: Optional[int] = None,
) -> Explanation:
    """Gradient of the predicted-class probability at x."""
    cls = predicted_class(model, x)
    g = model.input_gradient(x, cls)
    if cfg.absolute_value:
        g = np.abs(g)
    return Explanation(g, "vanilla_grad", instance_id)


def explain_gradient_x_input(
    model: Model,
    x: np.ndarray,
    instance_id: Optional[int] = None,
) -> Explanation:
    cls = predicted_class(model, x)
    g = model.input_gradient(x, cls)
    return Explanation(g * np.asarray(x, dtype=np.float64), "grad_x_input", instance_id)


def explain_smoothgrad(
    model: Model,
    x: np.ndarray,
    cfg: SmoothGradConfig,
    seed: int,
    instance_id: Optional[int] = None,
) -> Explanation:
    """Mean gradient over Gaussian jitter around x, explained class fixed
    to the prediction at x."""
    x = np.asarray(x, dtype=np.float64)
    cls = predicted_class(model, x)
    if cfg.std == 0.0:
        # degenerate noise: every sample sits at x
        return Explanation(model.input_gradient(x, cls), "smoothgrad", instance_id, seed)
    noise = rngmod.normal(rngmod.stream(seed, "smoothgrad"), (cfg.n_samples, x.size))
    pts = x[None, :] + cfg.std * noise
    grads = model.input_gradient(pts, cls)
    return Explanation(grads.mean(axis=0), "smoothgrad", instance_id, seed)


def resolve_baseline(kind: str, train_X: Optional[np.ndarray], d: int) -> np.ndarray:
    if kind == "zero":
        return np.zeros(d)
    if kind == "mean":
        if train_X is None:
            raise ExplainerError("mean baseline requires training data")
        return train_X.mean(axis=0)
    raise ExplainerError(f"unknown baseline kind {kind!r}")


def explain_integrated_gradients(
    model: Model,
    x: np.ndarray,
    cfg: IntegratedGradientsConfig,
    baseline: np.ndarray,
    instance_id: Optional[int] = None,
) -> Explanation:
    """Gauss-Legendre average of the gradient along the baseline->x path.

    With multiply_by_inputs=False (the default here) the path-averaged
    gradient itself is the attribution; the (x - baseline) factor is not
    applied.
    """
    x = np.asarray(x, dtype=np.float64)
    baseline = np.asarray(baseline, dtype=np.float64)
    if baseline.shape != x.shape:
        raise ExplainerError(f"baseline shape {baseline.shape} != input shape {x.shape}")
    cls = predicted_class(model, x)
    nodes, weights = np.polynomial.legendre.leggauss(cfg.n_steps)
    t = (nodes + 1.0) / 2.0  # map [-1,1] -> [0,1]
    w = weights / 2.0
    pts = baseline[None, :] + t[:, None] * (x - baseline)[None, :]
    grads = model.input_gradient(pts, cls)
    avg = w @ grads
    if cfg.multiply_by_inputs:
        avg = avg * (x - baseline)
    return Explanation(avg, "integrated_gradients", instance_id)
