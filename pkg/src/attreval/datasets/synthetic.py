"""Gaussian-cluster generator with built-in ground-truth attributions.

Instances are drawn from K well-separated isotropic Gaussian clusters.
Each cluster k carries a binary mask m_k (which features matter) and a
weight vector w_k (how much, and in which direction); labels come from
a sigmoid of (m_k * w_k) . x thresholded at the sample median, so
classes are exactly balanced. The per-instance vector m_k * w_k is the
ground-truth attribution that explanations are scored against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import rng as rngmod
from .loaders import split_rows
from .schema import DatasetError, DatasetSplit, FeatureSchema, GroundTruth

_MAX_MASK_REDRAWS = 100


@dataclass
class SynthConfig:
    """Knobs for the cluster generator; defaults match the stock recipe."""

    n_samples: int = 1000
    dim: int = 20
    n_clusters: int = 10
    distance_to_center: float = 6.0
    lower_weight: float = -1.0
    upper_weight: float = 1.0
    sparsity: float = 0.25
    sigma: Optional[float] = None  # per-feature std; None means 1 (identity covariance)
    test_size: float = 0.25
    seed: int = 564

    def __post_init__(self):
        if self.n_clusters < 1:
            raise DatasetError("n_clusters must be >= 1")
        if self.dim < 1:
            raise DatasetError("dim must be >= 1")
        if self.n_samples < 2:
            raise DatasetError("n_samples must be >= 2")
        if not self.lower_weight < self.upper_weight:
            raise DatasetError("lower_weight must be < upper_weight")
        if not 0.0 < self.sparsity <= 1.0:
            raise DatasetError("sparsity must be in (0, 1]")
        if not 0.0 < self.test_size < 1.0:
            raise DatasetError("test_size must be in (0, 1)")
        if self.sigma is not None and self.sigma <= 0:
            raise DatasetError("sigma must be positive")


def place_cluster_centers(n_clusters: int, dim: int, distance: float) -> np.ndarray:
    """Axis-aligned centers: center i sits at (i // dim + 1) * distance
    along axis i % dim, so the first `dim` clusters use unit directions,
    the next `dim` use doubled radii, and so on."""
    if n_clusters < 1 or dim < 1:
        raise DatasetError("need n_clusters >= 1 and dim >= 1")
    if distance <= 0:
        raise DatasetError("distance must be positive")
    centers = np.zeros((n_clusters, dim))
    for i in range(n_clusters):
        centers[i, i % dim] = (i // dim + 1) * distance
    return centers


def _sample_masks(K: int, d: int, p: float, rng: np.random.Generator) -> np.ndarray:
    masks = np.zeros((K, d))
    for k in range(K):
        for attempt in range(_MAX_MASK_REDRAWS + 1):
            m = (rng.random(d) < p).astype(np.float64)
            if m.any():
                masks[k] = m
                break
        else:
            raise DatasetError(
                f"cluster {k}: no active features after {_MAX_MASK_REDRAWS} mask redraws; "
                f"raise sparsity (p={p}) or lower dim"
            )
    return masks


def generate_synthetic(config: SynthConfig) -> tuple[DatasetSplit, GroundTruth]:
    """Generate a split dataset plus aligned ground-truth attributions.

    Deterministic for a fixed config: all draws come from streams keyed
    on config.seed, and ground truth rows are indexed by pre-split
    instance ids carried inside the returned split.
    """
    K, d, n = config.n_clusters, config.dim, config.n_samples
    centers = place_cluster_centers(K, d, config.distance_to_center)

    cluster_rng = rngmod.stream(config.seed, "clusters")
    weights = cluster_rng.uniform(config.lower_weight, config.upper_weight, size=(K, d))
    masks = _sample_masks(K, d, config.sparsity, cluster_rng)

    assign = rngmod.stream(config.seed, "assign").integers(0, K, size=n)
    noise = rngmod.normal(rngmod.stream(config.seed, "samples"), (n, d))
    scale = 1.0 if config.sigma is None else float(config.sigma)
    X = centers[assign] + scale * noise

    signal = masks[assign] * weights[assign]
    logits = np.einsum("ij,ij->i", signal, X)
    pi = 1.0 / (1.0 + np.exp(-logits))
    y = (pi > np.median(pi)).astype(np.int64)

    schema = [FeatureSchema(f"f{j}") for j in range(d)]
    split = split_rows(
        X,
        y,
        ratio=1.0 - config.test_size,
        seed=rngmod.derive_seed(config.seed, "synth-split"),
        schema=schema,
        name="synthetic",
    )
    truth = GroundTruth(masks=masks, weights=weights, cluster_index=assign)
    return split, truth
