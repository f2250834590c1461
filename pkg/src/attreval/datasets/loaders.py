"""CSV ingestion, train/test splitting, and feature standardization."""

from __future__ import annotations

import csv
import math
import warnings
from pathlib import Path
from typing import Optional

import numpy as np

from ..rng import stream
from .schema import (
    CONTINUOUS,
    DISCRETE_BINARY,
    DatasetError,
    DatasetSplit,
    FeatureSchema,
)


def split_rows(
    X: np.ndarray,
    y: np.ndarray,
    ratio: float,
    seed: int,
    schema: Optional[list[FeatureSchema]] = None,
    name: str = "dataset",
) -> DatasetSplit:
    """Seeded random partition; train side gets ceil(ratio * n) rows."""
    n = X.shape[0]
    if not 0.0 < ratio < 1.0:
        raise DatasetError(f"split ratio must be in (0,1), got {ratio}")
    if n < 2:
        raise DatasetError("need at least 2 rows to split")
    n_train = math.ceil(ratio * n)
    if n_train >= n:
        n_train = n - 1
    perm = stream(seed, "split").permutation(n)
    train_ids, test_ids = perm[:n_train], perm[n_train:]
    if schema is None:
        schema = [FeatureSchema(f"f{j}") for j in range(X.shape[1])]
    return DatasetSplit(
        train_X=X[train_ids],
        train_y=y[train_ids],
        test_X=X[test_ids],
        test_y=y[test_ids],
        schema=schema,
        train_ids=train_ids,
        test_ids=test_ids,
        name=name,
    )


def standardize(split: DatasetSplit) -> DatasetSplit:
    """Z-score continuous columns with train statistics; store the scaler.

    Discrete-binary columns pass through untouched. A zero-variance
    continuous column gets its std clamped to 1 (with a warning) so the
    transform stays invertible.
    """
    if split.scaler is not None:
        raise DatasetError("split is already standardized")
    cont = split.continuous_mask()
    mean = np.where(cont, split.train_X.mean(axis=0), 0.0)
    std = np.where(cont, split.train_X.std(axis=0), 1.0)
    degenerate = cont & (std == 0.0)
    if degenerate.any():
        names = [split.schema[j].name for j in np.flatnonzero(degenerate)]
        warnings.warn(f"zero-variance continuous columns {names}; std clamped to 1")
        std = np.where(degenerate, 1.0, std)
    return split.with_arrays(
        train_X=(split.train_X - mean) / std,
        test_X=(split.test_X - mean) / std,
        scaler=(mean, std),
    )


def unstandardize(split: DatasetSplit, X: np.ndarray) -> np.ndarray:
    """Invert the stored scaler on a feature matrix."""
    if split.scaler is None:
        return np.asarray(X)
    mean, std = split.scaler
    return np.asarray(X) * std + mean


def _parse_table(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty file") from None
        rows = [row for row in reader if row]
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    return header, rows


def load_csv(
    path,
    target: str,
    kinds: Optional[dict[str, str]] = None,
    protected: Optional[str] = None,
    ratio: float = 0.7,
    seed: int = 0,
    scale: bool = True,
    name: Optional[str] = None,
) -> DatasetSplit:
    """Load a headered CSV into a standardized, split DatasetSplit.

    Column kinds come from `kinds` overrides or are inferred: at most two
    distinct values means discrete-binary, anything else continuous. The
    target column must parse to {0,1}.
    """
    path = Path(path)
    header, rows = _parse_table(path)
    if target not in header:
        raise DatasetError(f"{path}: target column {target!r} not in header {header}")
    t_idx = header.index(target)
    feat_names = [h for i, h in enumerate(header) if i != t_idx]
    kinds = dict(kinds or {})
    for k in kinds:
        if k not in feat_names:
            raise DatasetError(f"kind override for unknown column {k!r}")
    if protected is not None and protected not in feat_names:
        raise DatasetError(f"protected column {protected!r} not in header")

    raw = np.empty((len(rows), len(feat_names)), dtype=np.float64)
    y = np.empty(len(rows), dtype=np.int64)
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise DatasetError(f"{path}: row {i + 2} has {len(row)} cells, expected {len(header)}")
        vals = []
        for j, cell in enumerate(row):
            try:
                vals.append(float(cell))
            except ValueError:
                col = header[j]
                raise DatasetError(f"{path}: non-numeric cell {cell!r} in column {col!r}, row {i + 2}") from None
        tv = vals.pop(t_idx)
        if tv not in (0.0, 1.0):
            raise DatasetError(f"{path}: target value {tv} is not binary 0/1 (row {i + 2})")
        y[i] = int(tv)
        raw[i] = vals

    schema = []
    for j, fname in enumerate(feat_names):
        distinct = np.unique(raw[:, j])
        is_01 = bool(np.isin(distinct, (0.0, 1.0)).all())
        declared = kinds.get(fname)
        if declared == DISCRETE_BINARY:
            if not is_01:
                raise DatasetError(
                    f"column {fname!r} declared discrete-binary but takes values {distinct[:4]}"
                )
            kind = DISCRETE_BINARY
        elif declared == CONTINUOUS:
            kind = CONTINUOUS
        else:
            # inference: at most two distinct 0/1 values means binary
            kind = DISCRETE_BINARY if (distinct.size <= 2 and is_01) else CONTINUOUS
        schema.append(FeatureSchema(fname, kind, protected=(fname == protected)))

    split = split_rows(raw, y, ratio, seed, schema=schema, name=name or path.stem)
    return standardize(split) if scale else split
