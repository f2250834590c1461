import numpy as np
import pytest

from attreval.explainers import (
    ExplainerError,
    GradConfig,
    IntegratedGradientsConfig,
    KernelShapConfig,
    LimeConfig,
    SmoothGradConfig,
    explain_gradient_x_input,
    explain_integrated_gradients,
    explain_kernel_shap,
    explain_lime,
    explain_random,
    explain_smoothgrad,
    explain_vanilla_gradient,
    make_explainer,
    shapley_kernel_weight,
)
from attreval.explainers.config import ExplainerConfig
from attreval.metrics import pairwise_rank_agreement, rank_correlation
from attreval.models import LinearModel, input_gradient, predict_proba

from oracles import exact_shapley, finite_diff_gradient

rng = np.random.default_rng(7)


class LinearScore:
    """Duck model whose class-1 output is exactly v.x + c (class 1 always wins)."""

    def __init__(self, v, c=0.0):
        self.v = np.asarray(v, dtype=np.float64)
        self.c = c

    def predict_proba(self, x):
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        X = np.atleast_2d(x)
        val = X @ self.v + self.c
        p = np.stack([np.full_like(val, -1e9), val], axis=-1)
        return p[0] if single else p

    def input_gradient(self, x, class_index):
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        X = np.atleast_2d(x)
        g = np.tile(self.v if class_index == 1 else np.zeros_like(self.v), (X.shape[0], 1))
        return g[0] if single else g


class ConstantModel:
    def __init__(self, d, p1=0.7):
        self.d = d
        self.p1 = p1

    def predict_proba(self, x):
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        X = np.atleast_2d(x)
        p = np.tile([1 - self.p1, self.p1], (X.shape[0], 1))
        return p[0] if single else p

    def input_gradient(self, x, class_index):
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        X = np.atleast_2d(x)
        g = np.zeros_like(X)
        return g[0] if single else g


def _random_lr(d=8):
    return LinearModel(W=rng.normal(size=(2, d)), b=rng.normal(size=2))


# ---------------------------------------------------------------- random

def test_random_deterministic():
    assert (explain_random(12, 5).attributions == explain_random(12, 5).attributions).all()


def test_random_range():
    a = explain_random(1000, 3).attributions
    assert a.min() > -1.0 and a.max() < 1.0


def test_random_mean_near_zero():
    # Monte-Carlo oracle for the Uniform(-1,1) mean
    a = explain_random(100_000, 11).attributions
    sigma = np.sqrt(1 / 3 / a.size)
    assert abs(a.mean()) <= 3 * sigma


# --------------------------------------------------------- vanilla gradient

def test_vanilla_equals_input_gradient_at_predicted_class():
    m = _random_lr()
    x = rng.normal(size=8)
    cls = int(np.argmax(predict_proba(m, x)))
    assert (explain_vanilla_gradient(m, x).attributions == input_gradient(m, x, cls)).all()


def test_vanilla_preserves_coefficient_ranking():
    m = _random_lr()
    w = m.W[1] - m.W[0]
    for _ in range(20):
        g = explain_vanilla_gradient(m, rng.normal(size=8)).attributions
        assert pairwise_rank_agreement(g, w) == 1.0
        assert rank_correlation(g, w) == 1.0


def test_gradient_family_rank_fidelity_on_random_lrs():
    # vanilla, smoothgrad, and IG all rank features exactly like |w1 - w0|
    from attreval.metrics import topk_agreement

    for trial in range(5):
        m = LinearModel(W=rng.normal(size=(2, 7)), b=rng.normal(size=2))
        w = m.W[1] - m.W[0]
        x = rng.normal(size=7)
        baseline = rng.normal(size=7)
        atts = (
            explain_vanilla_gradient(m, x).attributions,
            explain_smoothgrad(m, x, SmoothGradConfig(n_samples=64), seed=trial).attributions,
            explain_integrated_gradients(m, x, IntegratedGradientsConfig(), baseline).attributions,
        )
        for a in atts:
            assert pairwise_rank_agreement(a, w) == 1.0
            assert rank_correlation(a, w) == 1.0
            for k in range(1, 8):
                assert topk_agreement(a, w, k, "FA") == 1.0
                assert topk_agreement(a, w, k, "RA") == 1.0


def test_vanilla_zero_model():
    m = LinearModel(W=np.zeros((2, 5)), b=np.zeros(2))
    assert (explain_vanilla_gradient(m, rng.normal(size=5)).attributions == 0).all()


def test_vanilla_matches_finite_differences():
    m = _random_lr()
    x = rng.normal(size=8)
    cls = int(np.argmax(predict_proba(m, x)))
    fd = finite_diff_gradient(lambda z: predict_proba(m, z)[cls], x)
    assert np.abs(explain_vanilla_gradient(m, x).attributions - fd).max() < 1e-4


def test_vanilla_absolute_value_option():
    m = _random_lr()
    x = rng.normal(size=8)
    signed = explain_vanilla_gradient(m, x).attributions
    absd = explain_vanilla_gradient(m, x, GradConfig(absolute_value=True)).attributions
    assert (absd == np.abs(signed)).all()


# --------------------------------------------------------- gradient x input

def test_gxi_zero_input():
    m = _random_lr()
    assert (explain_gradient_x_input(m, np.zeros(8)).attributions == 0).all()


def test_gxi_single_support():
    m = _random_lr()
    x = np.zeros(8)
    x[3] = 2.0
    a = explain_gradient_x_input(m, x).attributions
    assert a[3] != 0.0
    assert (np.delete(a, 3) == 0).all()


def test_gxi_is_product_of_oracles():
    m = _random_lr()
    x = rng.normal(size=8)
    grad = explain_vanilla_gradient(m, x).attributions
    assert (explain_gradient_x_input(m, x).attributions == grad * x).all()


# -------------------------------------------------------------- smoothgrad

def test_smoothgrad_zero_std_equals_vanilla():
    m = _random_lr()
    x = rng.normal(size=8)
    sg = explain_smoothgrad(m, x, SmoothGradConfig(n_samples=10, std=0.0), seed=4)
    assert (sg.attributions == explain_vanilla_gradient(m, x).attributions).all()


def test_smoothgrad_single_sample_is_gradient_at_sampled_point():
    from attreval import rng as rngmod

    m = _random_lr()
    x = rng.normal(size=8)
    cfg = SmoothGradConfig(n_samples=1, std=0.3)
    sg = explain_smoothgrad(m, x, cfg, seed=9).attributions
    noise = rngmod.normal(rngmod.stream(9, "smoothgrad"), (1, 8))
    pt = x + cfg.std * noise[0]
    cls = int(np.argmax(predict_proba(m, x)))
    assert np.abs(sg - input_gradient(m, pt, cls)).max() == 0.0


def test_smoothgrad_converges_to_mc_oracle():
    m = _random_lr(5)
    x = rng.normal(size=5)
    cfg = SmoothGradConfig(n_samples=500)
    cls = int(np.argmax(predict_proba(m, x)))
    # independent MC oracle with its own generator and many samples
    orc = np.random.default_rng(1234)
    pts = x + cfg.std * orc.standard_normal((200_000, 5))
    grads = input_gradient(m, pts, cls)
    mean, se = grads.mean(axis=0), grads.std(axis=0, ddof=1) / np.sqrt(len(pts))
    ours = np.mean(
        [explain_smoothgrad(m, x, cfg, seed=s).attributions for s in range(40)], axis=0
    )
    own_se = np.std(
        [explain_smoothgrad(m, x, cfg, seed=s).attributions for s in range(40)], axis=0, ddof=1
    ) / np.sqrt(40)
    combined = np.sqrt(se**2 + own_se**2)
    assert (np.abs(ours - mean) <= 2 * np.maximum(combined, 1e-12)).all()


def test_smoothgrad_deterministic():
    m = _random_lr()
    x = rng.normal(size=8)
    a = explain_smoothgrad(m, x, SmoothGradConfig(n_samples=32), seed=2).attributions
    b = explain_smoothgrad(m, x, SmoothGradConfig(n_samples=32), seed=2).attributions
    assert (a == b).all()


# ------------------------------------------------------ integrated gradients

def test_ig_linear_model_returns_weights_any_baseline():
    v = rng.normal(size=6)
    lin = LinearScore(v)
    x = rng.normal(size=6)
    for baseline in (np.zeros(6), rng.normal(size=6), x + 1.0):
        a = explain_integrated_gradients(lin, x, IntegratedGradientsConfig(), baseline).attributions
        assert np.abs(a - v).max() < 1e-12


def test_ig_degenerate_path_is_gradient():
    m = _random_lr()
    x = rng.normal(size=8)
    a = explain_integrated_gradients(m, x, IntegratedGradientsConfig(), x.copy()).attributions
    assert np.abs(a - explain_vanilla_gradient(m, x).attributions).max() < 1e-12


def test_ig_quadrature_refinement():
    m = _random_lr()
    x = rng.normal(size=8)
    baseline = rng.normal(size=8)
    coarse = explain_integrated_gradients(m, x, IntegratedGradientsConfig(n_steps=50), baseline)
    fine = explain_integrated_gradients(m, x, IntegratedGradientsConfig(n_steps=5000), baseline)
    assert np.abs(coarse.attributions - fine.attributions).max() < 1e-6


def test_ig_multiply_by_inputs_factor():
    v = rng.normal(size=4)
    lin = LinearScore(v)
    x = rng.normal(size=4)
    baseline = rng.normal(size=4)
    a = explain_integrated_gradients(
        lin, x, IntegratedGradientsConfig(multiply_by_inputs=True), baseline
    ).attributions
    assert np.abs(a - v * (x - baseline)).max() < 1e-12


def test_ig_baseline_length_mismatch():
    m = _random_lr()
    with pytest.raises(ExplainerError):
        explain_integrated_gradients(m, np.zeros(8), IntegratedGradientsConfig(), np.zeros(3))


# ------------------------------------------------------------------- lime

def test_lime_recovers_linear_coefficients():
    v = rng.normal(size=6)
    lin = LinearScore(v, c=0.3)
    x = rng.normal(size=6)
    a = explain_lime(lin, x, LimeConfig(), seed=11).attributions
    assert np.abs(a - v).max() / np.abs(v).max() < 1e-4


def test_lime_constant_model_zero_coefficients():
    m = ConstantModel(d=5)
    a = explain_lime(m, rng.normal(size=5), LimeConfig(), seed=3).attributions
    assert np.abs(a).max() < 1e-6


def test_lime_deterministic():
    m = _random_lr()
    x = rng.normal(size=8)
    a = explain_lime(m, x, LimeConfig(), seed=21).attributions
    b = explain_lime(m, x, LimeConfig(), seed=21).attributions
    assert (a == b).all()


# ------------------------------------------------------------- kernel shap

def test_kernel_weight_formula():
    # d=4, s=1: 3 / (C(4,1)*1*3) = 0.25
    assert shapley_kernel_weight(4, 1) == pytest.approx(3 / 12)
    assert shapley_kernel_weight(4, 2) == pytest.approx(3 / (6 * 2 * 2))
    with pytest.raises(ExplainerError):
        shapley_kernel_weight(4, 0)


def test_kernel_shap_linear_closed_form_sampled():
    v = rng.normal(size=12)
    lin = LinearScore(v)
    x = rng.normal(size=12)
    baseline = rng.normal(size=12)
    ref = v * (x - baseline)
    est = np.mean(
        [
            explain_kernel_shap(lin, x, KernelShapConfig(), baseline, seed=s).attributions
            for s in range(20)
        ],
        axis=0,
    )
    assert np.abs(est - ref).max() <= 0.05 * np.abs(ref).max()


def test_kernel_shap_constant_model():
    m = ConstantModel(d=6)
    a = explain_kernel_shap(m, rng.normal(size=6), KernelShapConfig(), np.zeros(6), seed=2)
    assert np.abs(a.attributions).max() < 1e-9


@pytest.mark.parametrize("d", [4, 8, 10])
def test_kernel_shap_exhaustive_matches_brute_force(d):
    m = _random_lr(d)
    x = rng.normal(size=d)
    baseline = rng.normal(size=d)
    cls = int(np.argmax(predict_proba(m, x)))

    def value(mask):
        pt = mask * x + (1 - mask) * baseline
        return predict_proba(m, pt)[cls]

    ref = exact_shapley(value, d)
    est = explain_kernel_shap(m, x, KernelShapConfig(exhaustive=True), baseline, seed=0)
    assert np.abs(est.attributions - ref).max() < 1e-6


def test_kernel_shap_local_accuracy_exhaustive():
    d = 8
    m = _random_lr(d)
    x = rng.normal(size=d)
    baseline = rng.normal(size=d)
    cls = int(np.argmax(predict_proba(m, x)))
    a = explain_kernel_shap(m, x, KernelShapConfig(exhaustive=True), baseline, seed=0)
    gap = predict_proba(m, x)[cls] - predict_proba(m, baseline)[cls]
    assert abs(a.attributions.sum() - gap) < 1e-6


def test_kernel_shap_deterministic():
    m = _random_lr()
    x = rng.normal(size=8)
    a = explain_kernel_shap(m, x, KernelShapConfig(), np.zeros(8), seed=5).attributions
    b = explain_kernel_shap(m, x, KernelShapConfig(), np.zeros(8), seed=5).attributions
    assert (a == b).all()


# ------------------------------------------------------------ registry/fuzz

def test_all_methods_shape_finite_deterministic(lr_small, synth_small):
    split, _ = synth_small
    cfg = ExplainerConfig(
        smoothgrad=SmoothGradConfig(n_samples=16),
        lime=LimeConfig(n_samples=64),
        shap=KernelShapConfig(subset_size=16),
    )
    from attreval.explainers import METHODS

    for method in METHODS:
        fn = make_explainer(method, cfg, split.train_X)
        for i in range(5):
            x = split.test_X[i]
            a = fn(lr_small, x, 1000 + i, i).attributions
            b = fn(lr_small, x, 1000 + i, i).attributions
            assert a.shape == (split.dim,)
            assert np.isfinite(a).all()
            assert (a == b).all()


def test_unknown_method_rejected():
    with pytest.raises(ExplainerError):
        make_explainer("anchors", ExplainerConfig())
