import math

import numpy as np
import pytest

from attreval import rng as rngmod
from attreval.datasets.schema import CONTINUOUS, FeatureSchema
from attreval.metrics import (
    MetricError,
    PerturbationConfig,
    StabilityConfig,
    percent_change,
    perturb_batch,
    relative_stability,
    relative_stability_all,
)
from attreval.models import LinearModel


def _schema(d):
    return [FeatureSchema(f"f{i}", CONTINUOUS) for i in range(d)]


def _lr(d=4, seed=0):
    r = np.random.default_rng(seed)
    return LinearModel(W=r.normal(size=(2, d)), b=r.normal(size=2))


def test_percent_change_plain():
    out = percent_change(np.array([1.1, 1.0]), np.array([1.0, 1.0]), 1e-12)
    assert np.allclose(out, [-0.1, 0.0])


def test_percent_change_zero_guard_sign_preserving():
    base = np.array([0.0, -1e-15, 1e-15])
    out = percent_change(np.array([1.0, 1.0, 1.0]), base, 1e-12)
    assert out[0] == (0.0 - 1.0) / 1e-12
    assert out[1] == (-1e-15 - 1.0) / -1e-12
    assert out[2] == (1e-15 - 1.0) / 1e-12


def test_hand_checked_single_neighbor():
    # x=[1,1] -> x'=[1.1,1], e=[2,2] -> e'=[2.2,2]: numerator 0.1,
    # denominator 0.1, ratio 1, log 0
    scfg = StabilityConfig()
    x = np.array([1.0, 1.0])
    xp = np.array([1.1, 1.0])
    e_x = np.array([2.0, 2.0])
    e_xp = np.array([2.2, 2.0])
    num = np.linalg.norm(percent_change(e_xp, e_x, scfg.eps_num), scfg.p)
    den = np.linalg.norm(percent_change(xp, x, scfg.eps_num), scfg.p)
    assert num == pytest.approx(0.1, abs=1e-15)
    assert den == pytest.approx(0.1, abs=1e-15)
    ratio = num / max(den, scfg.eps_min)
    assert math.log(max(ratio, scfg.eps_num)) == pytest.approx(0.0, abs=1e-12)


def test_constant_explainer_hits_floor(lr_small, synth_small):
    split, _ = synth_small
    x = split.test_X[0]
    e = np.ones(split.dim)

    def explain(pt, draw):
        return e

    scfg = StabilityConfig(n_neighbors=20)
    v = relative_stability(lr_small, x, explain, "RIS", split.schema, scfg,
                           PerturbationConfig(), seed=3)
    assert v == pytest.approx(math.log(scfg.eps_num))


def test_brute_force_formula_agreement(lr_small, synth_small):
    # recompute the full formula from the same sampled neighbors
    split, _ = synth_small
    d = split.dim
    x = split.test_X[2]
    scfg = StabilityConfig(n_neighbors=25)
    pcfg = PerturbationConfig()
    seed = 77
    g = np.random.default_rng(5).normal(size=d)

    def explain(pt, draw):
        # deterministic, input-dependent explanation
        return g * (1 + np.asarray(pt).sum())

    values, kept = relative_stability_all(lr_small, x, explain, split.schema, scfg, pcfg, seed)

    neighbors = perturb_batch(x, np.arange(d), split.schema,
                              pcfg, rngmod.stream(seed, "stability-neighborhood"), scfg.n_neighbors)
    cls = int(np.argmax(lr_small.predict_proba(x)))
    keep = lr_small.predict_proba(neighbors).argmax(axis=1) == cls
    assert kept == int(keep.sum())
    e_x = explain(x, -1)

    def pc(new, base):
        sign = np.where(base < 0, -1.0, 1.0)
        denom = np.where(np.abs(base) < scfg.eps_num, sign * scfg.eps_num, base)
        return (base - new) / denom

    expected = {}
    for mode in ("RIS", "RRS", "ROS"):
        ratios = []
        for xp in neighbors[keep]:
            e_xp = explain(xp, 0)
            num = np.linalg.norm(pc(e_xp, e_x), 2)
            if mode == "RIS":
                den = np.linalg.norm(pc(xp, x), 2)
            elif mode == "RRS":
                den = np.linalg.norm(pc(lr_small.representation(xp), lr_small.representation(x)), 2)
            else:
                den = np.linalg.norm(pc(lr_small.predict_proba(xp), lr_small.predict_proba(x)), 2)
            ratios.append(num / max(den, scfg.eps_min))
        expected[mode] = math.log(max(max(ratios), scfg.eps_num))
    for mode in ("RIS", "RRS", "ROS"):
        assert values[mode] == pytest.approx(expected[mode], abs=1e-12)


def test_no_surviving_neighbor_returns_nan():
    class FlipModel:
        # predicts class 1 only at the exact base point
        def __init__(self, base):
            self.base = base

        def predict_proba(self, x):
            x = np.asarray(x)
            single = x.ndim == 1
            X = np.atleast_2d(x)
            is_base = np.all(X == self.base, axis=1)
            p = np.where(is_base[:, None], [0.1, 0.9], [0.9, 0.1])
            return p[0] if single else p

        def representation(self, x):
            return np.asarray(x, dtype=np.float64)

    x = np.ones(3)
    model = FlipModel(x)
    values, kept = relative_stability_all(
        model, x, lambda pt, draw: np.ones(3), _schema(3),
        StabilityConfig(n_neighbors=10), PerturbationConfig(), seed=1,
    )
    assert kept == 0
    assert all(math.isnan(v) for v in values.values())


def test_single_mode_wrapper_matches_all(lr_small, synth_small):
    split, _ = synth_small
    x = split.test_X[4]

    def explain(pt, draw):
        return np.asarray(pt, dtype=np.float64) * 2.0 + 1.0

    scfg = StabilityConfig(n_neighbors=12)
    pcfg = PerturbationConfig()
    values, _ = relative_stability_all(lr_small, x, explain, split.schema, scfg, pcfg, 9)
    for mode in ("RIS", "RRS", "ROS"):
        assert relative_stability(lr_small, x, explain, mode, split.schema, scfg, pcfg, 9) == values[mode]


def test_unknown_mode_rejected(lr_small, synth_small):
    split, _ = synth_small
    with pytest.raises(MetricError):
        relative_stability(lr_small, split.test_X[0], lambda p, d: np.ones(split.dim),
                           "XXX", split.schema, StabilityConfig(), PerturbationConfig(), 0)


def test_stability_deterministic(lr_small, synth_small):
    split, _ = synth_small
    x = split.test_X[3]

    def explain(pt, draw):
        return np.asarray(pt, dtype=np.float64) ** 2 + 0.5

    args = (lr_small, x, explain, split.schema, StabilityConfig(n_neighbors=15),
            PerturbationConfig(), 44)
    a, _ = relative_stability_all(*args)
    b, _ = relative_stability_all(*args)
    assert a == b
