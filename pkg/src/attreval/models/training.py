"""Mini-batch Adam training for both model families."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import rng as rngmod
from ..datasets.schema import DatasetSplit
from .families import LinearModel, MlpModel, softmax


class TrainingError(ValueError):
    pass


@dataclass
class TrainConfig:
    epochs: int = 50
    learning_rate: float = 0.001
    batch_size: int = 32
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 0:
            raise TrainingError("epochs must be >= 0")
        if self.learning_rate <= 0 or self.batch_size <= 0:
            raise TrainingError("learning rate and batch size must be positive")


class _Adam:
    def __init__(self, params: list[np.ndarray], cfg: TrainConfig):
        self.cfg = cfg
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, params: list[np.ndarray], grads: list[np.ndarray]) -> None:
        c = self.cfg
        self.t += 1
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= c.beta1
            m += (1 - c.beta1) * g
            v *= c.beta2
            v += (1 - c.beta2) * g * g
            mhat = m / (1 - c.beta1**self.t)
            vhat = v / (1 - c.beta2**self.t)
            p -= c.learning_rate * mhat / (np.sqrt(vhat) + c.eps)


def _init_layer(rng: np.random.Generator, n_out: int, n_in: int):
    bound = 1.0 / np.sqrt(n_in)
    W = rng.uniform(-bound, bound, size=(n_out, n_in))
    b = rng.uniform(-bound, bound, size=n_out)
    return W, b


def _check_labels(y: np.ndarray) -> None:
    if np.unique(y).size < 2:
        raise TrainingError("training data contains a single class")


def _train_loop(params, forward_backward, n, cfg: TrainConfig) -> list[float]:
    """Runs the epochs; returns per-epoch mean loss."""
    opt = _Adam(params, cfg)
    losses = []
    for epoch in range(cfg.epochs):
        perm = rngmod.stream(cfg.seed, "epoch", epoch).permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = perm[start : start + cfg.batch_size]
            loss, grads = forward_backward(idx)
            epoch_loss += loss * idx.size
            opt.step(params, grads)
        losses.append(epoch_loss / n)
    return losses


def _cross_entropy(p: np.ndarray, y: np.ndarray) -> float:
    return float(-np.mean(np.log(np.clip(p[np.arange(y.size), y], 1e-300, None))))


def train_logistic(split: DatasetSplit, cfg: TrainConfig) -> LinearModel:
    """Fit the two-logit LR by mini-batch Adam on cross-entropy."""
    X, y = split.train_X, split.train_y
    _check_labels(y)
    d, C = X.shape[1], 2
    init = rngmod.stream(cfg.seed, "init-lr")
    W, b = _init_layer(init, C, d)
    params = [W, b]

    def fb(idx):
        Xb, yb = X[idx], y[idx]
        p = softmax(Xb @ W.T + b)
        loss = _cross_entropy(p, yb)
        gz = p.copy()
        gz[np.arange(yb.size), yb] -= 1.0
        gz /= yb.size
        return loss, [gz.T @ Xb, gz.sum(axis=0)]

    losses = _train_loop(params, fb, X.shape[0], cfg)
    meta = {"dataset": split.name, "seed": cfg.seed, "epochs": cfg.epochs, "loss_trace": losses}
    return LinearModel(W=W, b=b, meta=meta)


def train_mlp(split: DatasetSplit, cfg: TrainConfig, hidden: int = 100) -> MlpModel:
    """Fit the 2x`hidden` ReLU MLP by mini-batch Adam on cross-entropy."""
    X, y = split.train_X, split.train_y
    _check_labels(y)
    d, C = X.shape[1], 2
    init = rngmod.stream(cfg.seed, "init-mlp")
    W1, b1 = _init_layer(init, hidden, d)
    W2, b2 = _init_layer(init, hidden, hidden)
    W3, b3 = _init_layer(init, C, hidden)
    params = [W1, b1, W2, b2, W3, b3]

    def fb(idx):
        Xb, yb = X[idx], y[idx]
        a1 = Xb @ W1.T + b1
        h1 = np.maximum(a1, 0.0)
        a2 = h1 @ W2.T + b2
        h2 = np.maximum(a2, 0.0)
        p = softmax(h2 @ W3.T + b3)
        loss = _cross_entropy(p, yb)
        gz = p.copy()
        gz[np.arange(yb.size), yb] -= 1.0
        gz /= yb.size
        g2 = (gz @ W3) * (a2 > 0.0)
        g1 = (g2 @ W2) * (a1 > 0.0)
        return loss, [
            g1.T @ Xb,
            g1.sum(axis=0),
            g2.T @ h1,
            g2.sum(axis=0),
            gz.T @ h2,
            gz.sum(axis=0),
        ]

    losses = _train_loop(params, fb, X.shape[0], cfg)
    meta = {"dataset": split.name, "seed": cfg.seed, "epochs": cfg.epochs, "loss_trace": losses}
    return MlpModel(W1=W1, b1=b1, W2=W2, b2=b2, W3=W3, b3=b3, meta=meta)
