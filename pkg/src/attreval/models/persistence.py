"""Bit-exact model serialization to a self-describing JSON file."""

from __future__ import annotations

import base64
import json
from pathlib import Path

import numpy as np

from .families import LinearModel, MlpModel

FORMAT_VERSION = 1

_ARRAY_FIELDS = {
    "logistic": ("W", "b"),
    "mlp": ("W1", "b1", "W2", "b2", "W3", "b3"),
}


class ModelPersistError(ValueError):
    pass


def _encode(a: np.ndarray) -> dict:
    a = np.ascontiguousarray(a, dtype=np.float64)
    return {"shape": list(a.shape), "data": base64.b64encode(a.tobytes()).decode("ascii")}


def _decode(obj: dict) -> np.ndarray:
    try:
        shape = tuple(obj["shape"])
        raw = base64.b64decode(obj["data"], validate=True)
        a = np.frombuffer(raw, dtype=np.float64).reshape(shape)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelPersistError(f"corrupt array record: {exc}") from exc
    return a.copy()


def save_model(model, path) -> Path:
    path = Path(path)
    fields = _ARRAY_FIELDS.get(model.family)
    if fields is None:
        raise ModelPersistError(f"unknown model family {model.family!r}")
    doc = {
        "format_version": FORMAT_VERSION,
        "family": model.family,
        "arrays": {name: _encode(getattr(model, name)) for name in fields},
        "meta": model.meta,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True), encoding="utf-8")
    return path


def load_model(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelPersistError(f"cannot parse model file {path}: {exc}") from exc
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelPersistError(f"{path}: format version {version} not supported (want {FORMAT_VERSION})")
    family = doc.get("family")
    fields = _ARRAY_FIELDS.get(family)
    if fields is None:
        raise ModelPersistError(f"{path}: unknown model family {family!r}")
    try:
        arrays = {name: _decode(doc["arrays"][name]) for name in fields}
    except KeyError as exc:
        raise ModelPersistError(f"{path}: missing array {exc}") from None
    meta = doc.get("meta", {})
    cls = LinearModel if family == "logistic" else MlpModel
    return cls(**arrays, meta=meta)
