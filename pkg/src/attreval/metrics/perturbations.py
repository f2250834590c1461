"""Neighborhood sampling used by the prediction-gap and stability metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import rng as rngmod
from ..datasets.schema import DISCRETE_BINARY, FeatureSchema
from .agreement import MetricError


@dataclass
class PerturbationConfig:
    mean: float = 0.0
    std: float = 0.05
    flip_percentage: float = 0.03
    n_perturbations: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.std <= 0:
            raise MetricError("perturbation std must be positive")
        if not 0.0 <= self.flip_percentage <= 1.0:
            raise MetricError("flip_percentage must be in [0, 1]")
        if self.n_perturbations < 1:
            raise MetricError("need n_perturbations >= 1")


def perturb_batch(
    x: np.ndarray,
    perturb_idx: np.ndarray,
    schema: list[FeatureSchema],
    cfg: PerturbationConfig,
    rng: np.random.Generator,
    n: int,
) -> np.ndarray:
    """n copies of x with the indexed features jittered.

    Continuous features get additive N(mean, std^2) noise; discrete-binary
    features flip with probability flip_percentage; everything outside
    `perturb_idx` is copied bit-for-bit.
    """
    x = np.asarray(x, dtype=np.float64)
    d = x.size
    if len(schema) != d:
        raise MetricError(f"schema length {len(schema)} != dimension {d}")
    out = np.tile(x, (n, 1))
    idx = np.asarray(perturb_idx, dtype=np.int64).reshape(-1)
    if idx.size == 0:
        return out
    if idx.min() < 0 or idx.max() >= d:
        raise MetricError("perturbation index out of range")
    binary = np.array([schema[j].kind == DISCRETE_BINARY for j in idx])
    cont_idx = idx[~binary]
    bin_idx = idx[binary]
    if cont_idx.size:
        noise = cfg.mean + cfg.std * rngmod.normal(rng, (n, cont_idx.size))
        out[:, cont_idx] += noise
    if bin_idx.size:
        flips = rng.random((n, bin_idx.size)) < cfg.flip_percentage
        out[:, bin_idx] = np.where(flips, 1.0 - out[:, bin_idx], out[:, bin_idx])
    return out


def perturb_instance(
    x: np.ndarray,
    perturb_idx: np.ndarray,
    schema: list[FeatureSchema],
    cfg: PerturbationConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """Single perturbed copy of x; see perturb_batch."""
    return perturb_batch(x, perturb_idx, schema, cfg, rng, 1)[0]
