"""Core dataset containers shared by every stage of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

CONTINUOUS = "continuous"
DISCRETE_BINARY = "discrete-binary"


class DatasetError(ValueError):
    """Raised when data violates a dataset contract."""


@dataclass(frozen=True)
class FeatureSchema:
    """Per-feature description: name, value kind, protected flag."""

    name: str
    kind: str = CONTINUOUS
    protected: bool = False

    def __post_init__(self):
        if self.kind not in (CONTINUOUS, DISCRETE_BINARY):
            raise DatasetError(f"unknown feature kind {self.kind!r}")


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def validate_schema(schema: list[FeatureSchema]) -> None:
    n_protected = sum(f.protected for f in schema)
    if n_protected > 1:
        raise DatasetError(f"at most one protected feature allowed, got {n_protected}")


@dataclass
class DatasetSplit:
    """Train/test matrices plus per-feature schema.

    Arrays are frozen read-only on construction; the split is safe to
    share across parallel workers. `train_ids`/`test_ids` are stable row
    ids into the pre-split instance order, so ground truth generated
    before splitting can be realigned to either side.
    """

    train_X: np.ndarray
    train_y: np.ndarray
    test_X: np.ndarray
    test_y: np.ndarray
    schema: list[FeatureSchema]
    train_ids: np.ndarray
    test_ids: np.ndarray
    scaler: Optional[tuple[np.ndarray, np.ndarray]] = None  # (mean, std) per feature
    name: str = "dataset"

    def __post_init__(self):
        validate_schema(self.schema)
        d = len(self.schema)
        for label, X in (("train_X", self.train_X), ("test_X", self.test_X)):
            if X.ndim != 2 or X.shape[1] != d:
                raise DatasetError(f"{label} must be 2-d with {d} columns, got {X.shape}")
        for label, y in (("train_y", self.train_y), ("test_y", self.test_y)):
            if not np.isin(y, (0, 1)).all():
                raise DatasetError(f"{label} labels must be binary 0/1")
        if self.train_X.shape[0] != self.train_y.shape[0]:
            raise DatasetError("train_X/train_y row mismatch")
        if self.test_X.shape[0] != self.test_y.shape[0]:
            raise DatasetError("test_X/test_y row mismatch")
        self.train_X = _freeze(np.asarray(self.train_X, dtype=np.float64))
        self.test_X = _freeze(np.asarray(self.test_X, dtype=np.float64))
        self.train_y = _freeze(np.asarray(self.train_y, dtype=np.int64))
        self.test_y = _freeze(np.asarray(self.test_y, dtype=np.int64))
        self.train_ids = _freeze(np.asarray(self.train_ids, dtype=np.int64))
        self.test_ids = _freeze(np.asarray(self.test_ids, dtype=np.int64))

    @property
    def dim(self) -> int:
        return len(self.schema)

    @property
    def feature_names(self) -> list[str]:
        return [f.name for f in self.schema]

    def protected_index(self) -> Optional[int]:
        for j, f in enumerate(self.schema):
            if f.protected:
                return j
        return None

    def continuous_mask(self) -> np.ndarray:
        return np.array([f.kind == CONTINUOUS for f in self.schema], dtype=bool)

    def with_arrays(self, **kw) -> "DatasetSplit":
        return replace(self, **kw)


@dataclass
class GroundTruth:
    """Per-cluster masks/weights and the per-instance importance they induce.

    `importance[i] = masks[cluster_index[i]] * weights[cluster_index[i]]`,
    indexed by pre-split instance order.
    """

    masks: np.ndarray  # (K, d) in {0,1}
    weights: np.ndarray  # (K, d)
    cluster_index: np.ndarray  # (n,)
    importance: np.ndarray = field(init=False)

    def __post_init__(self):
        if (self.masks.sum(axis=1) == 0).any():
            raise DatasetError("every cluster mask needs at least one active feature")
        self.masks = _freeze(np.asarray(self.masks, dtype=np.float64))
        self.weights = _freeze(np.asarray(self.weights, dtype=np.float64))
        self.cluster_index = _freeze(np.asarray(self.cluster_index, dtype=np.int64))
        imp = self.masks[self.cluster_index] * self.weights[self.cluster_index]
        self.importance = _freeze(imp)

    def for_ids(self, ids: np.ndarray) -> np.ndarray:
        """Importance rows for the given stable instance ids."""
        return self.importance[np.asarray(ids, dtype=np.int64)]
