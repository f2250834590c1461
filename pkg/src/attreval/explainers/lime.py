"""Local linear surrogate fitted on Gaussian perturbations (LIME-style)."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .. import rng as rngmod
from ..datasets.schema import FeatureSchema
from ..models.families import Model, predicted_class
from .base import Explanation
from .config import LimeConfig


def explain_lime(
    model: Model,
    x: np.ndarray,
    cfg: LimeConfig,
    seed: int,
    schema: Optional[list[FeatureSchema]] = None,
    instance_id: Optional[int] = None,
) -> Explanation:
    """Weighted least squares from perturbed inputs to the predicted-class
    probability; the fitted slopes are the attribution.

    Perturbations are N(x, std^2 I) for every feature (binary features are
    jittered like continuous ones; discretization is disabled). Sample
    weights use the exponential kernel exp(-||z - x||^2 / width^2) on
    Euclidean distance. A small ridge keeps the normal equations sane; the
    intercept is fitted but not reported.
    """
    x = np.asarray(x, dtype=np.float64)
    d = x.size
    cls = predicted_class(model, x)
    rng = rngmod.stream(seed, "lime")
    z = x[None, :] + cfg.sample_std * rngmod.normal(rng, (cfg.n_samples, d))
    if not cfg.sample_around_instance:
        z = cfg.sample_std * rngmod.normal(rng, (cfg.n_samples, d))
    target = model.predict_proba(z)[:, cls]

    dist2 = ((z - x) ** 2).sum(axis=1)
    w = np.exp(-dist2 / cfg.kernel_width**2)

    A = np.hstack([z, np.ones((cfg.n_samples, 1))])
    Aw = A * w[:, None]
    gram = A.T @ Aw + cfg.ridge * np.eye(d + 1)
    beta = np.linalg.solve(gram, Aw.T @ target)
    return Explanation(beta[:d], "lime", instance_id, seed)
