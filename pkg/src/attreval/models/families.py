"""The two predictor families: softmax logistic regression and a fixed
two-hidden-layer ReLU MLP, both with closed-form input gradients."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


class ModelError(ValueError):
    """Shape mismatch or invalid model state."""


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _as_batch(x: np.ndarray, d: int) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != d:
        raise ModelError(f"expected input with {d} features, got shape {x.shape}")
    return x, single


@dataclass
class LinearModel:
    """Two-logit logistic regression: p = softmax(W x + b)."""

    W: np.ndarray  # (C, d)
    b: np.ndarray  # (C,)
    meta: dict[str, Any] = field(default_factory=dict)

    family = "logistic"

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=np.float64)
        self.b = np.asarray(self.b, dtype=np.float64)
        if self.W.ndim != 2 or self.b.shape != (self.W.shape[0],):
            raise ModelError("inconsistent LR parameter shapes")
        if not (np.isfinite(self.W).all() and np.isfinite(self.b).all()):
            raise ModelError("non-finite LR parameters")

    @property
    def dim(self) -> int:
        return self.W.shape[1]

    @property
    def n_classes(self) -> int:
        return self.W.shape[0]

    def coefficients(self) -> np.ndarray:
        """Class-1 decision direction w1 - w0; the model-based ground truth."""
        return self.W[1] - self.W[0]

    def logits(self, x: np.ndarray) -> np.ndarray:
        X, single = _as_batch(x, self.dim)
        z = X @ self.W.T + self.b
        return z[0] if single else z

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        return softmax(self.logits(x))

    def representation(self, x: np.ndarray) -> np.ndarray:
        # pre-softmax logits
        return self.logits(x)

    def input_gradient(self, x: np.ndarray, class_index: int) -> np.ndarray:
        if not 0 <= class_index < self.n_classes:
            raise ModelError(f"class index {class_index} out of range")
        X, single = _as_batch(x, self.dim)
        p = softmax(X @ self.W.T + self.b)
        # d p_c / d x = p_c (W_c - sum_j p_j W_j)
        g = p[:, class_index, None] * (self.W[class_index][None, :] - p @ self.W)
        return g[0] if single else g


@dataclass
class MlpModel:
    """Two hidden ReLU layers of width 100, softmax output."""

    W1: np.ndarray  # (H, d)
    b1: np.ndarray
    W2: np.ndarray  # (H, H)
    b2: np.ndarray
    W3: np.ndarray  # (C, H)
    b3: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)

    family = "mlp"

    def __post_init__(self):
        for name in ("W1", "b1", "W2", "b2", "W3", "b3"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        h = self.W1.shape[0]
        ok = (
            self.b1.shape == (h,)
            and self.W2.shape == (h, h)
            and self.b2.shape == (h,)
            and self.W3.shape[1] == h
            and self.b3.shape == (self.W3.shape[0],)
        )
        if not ok:
            raise ModelError("inconsistent MLP layer shapes")
        for name in ("W1", "b1", "W2", "b2", "W3", "b3"):
            if not np.isfinite(getattr(self, name)).all():
                raise ModelError(f"non-finite parameters in {name}")

    @property
    def dim(self) -> int:
        return self.W1.shape[1]

    @property
    def n_classes(self) -> int:
        return self.W3.shape[0]

    def _forward(self, X: np.ndarray):
        a1 = X @ self.W1.T + self.b1
        h1 = np.maximum(a1, 0.0)
        a2 = h1 @ self.W2.T + self.b2
        h2 = np.maximum(a2, 0.0)
        z = h2 @ self.W3.T + self.b3
        return a1, h1, a2, h2, z

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        X, single = _as_batch(x, self.dim)
        p = softmax(self._forward(X)[4])
        return p[0] if single else p

    def representation(self, x: np.ndarray) -> np.ndarray:
        # first hidden layer pre-activation
        X, single = _as_batch(x, self.dim)
        a1 = X @ self.W1.T + self.b1
        return a1[0] if single else a1

    def input_gradient(self, x: np.ndarray, class_index: int) -> np.ndarray:
        if not 0 <= class_index < self.n_classes:
            raise ModelError(f"class index {class_index} out of range")
        X, single = _as_batch(x, self.dim)
        a1, _, a2, _, z = self._forward(X)
        p = softmax(z)
        onehot = np.zeros(self.n_classes)
        onehot[class_index] = 1.0
        gz = p[:, class_index, None] * (onehot[None, :] - p)  # d p_c / d z
        g2 = (gz @ self.W3) * (a2 > 0.0)
        g1 = (g2 @ self.W2) * (a1 > 0.0)
        g = g1 @ self.W1
        return g[0] if single else g


Model = LinearModel | MlpModel


def predict_proba(model: Model, x: np.ndarray) -> np.ndarray:
    """Class probabilities; rows sum to one."""
    return model.predict_proba(x)


def input_gradient(model: Model, x: np.ndarray, class_index: int) -> np.ndarray:
    """Exact gradient of predict_proba(model, x)[class_index] w.r.t. x."""
    return model.input_gradient(x, class_index)


def representation(model: Model, x: np.ndarray) -> np.ndarray:
    """Internal representation: LR logits, or MLP first-layer pre-activations."""
    return model.representation(x)


def predicted_class(model: Model, x: np.ndarray) -> np.ndarray | int:
    p = model.predict_proba(x)
    return int(np.argmax(p)) if p.ndim == 1 else np.argmax(p, axis=1)


def accuracy(model: Model, X: np.ndarray, y: np.ndarray) -> float:
    return float(np.mean(predicted_class(model, X) == np.asarray(y)))
