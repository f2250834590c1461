from typing import Callable, Optional

import numpy as np

from ..models.families import Model
from .base import Explanation, ExplainerError
from .config import (
    ExplainerConfig,
    ExplainerConfigError,
    GradConfig,
    IntegratedGradientsConfig,
    KernelShapConfig,
    LimeConfig,
    SmoothGradConfig,
)
from .gradients import (
    explain_gradient_x_input,
    explain_integrated_gradients,
    explain_random,
    explain_smoothgrad,
    explain_vanilla_gradient,
    resolve_baseline,
)
from .kernelshap import explain_kernel_shap, shapley_kernel_weight
from .lime import explain_lime
from .serialize import read_csv, read_jsonl, write_csv, write_jsonl

METHODS = (
    "random",
    "vanilla_grad",
    "grad_x_input",
    "smoothgrad",
    "integrated_gradients",
    "lime",
    "kernel_shap",
)

ExplainFn = Callable[[Model, np.ndarray, int, Optional[int]], Explanation]


def make_explainer(method: str, cfg: ExplainerConfig, train_X: Optional[np.ndarray] = None) -> ExplainFn:
    """Bind a method name and config into a uniform (model, x, seed, id) call."""
    if method == "random":
        return lambda model, x, seed, iid=None: explain_random(np.asarray(x).size, seed, iid)
    if method == "vanilla_grad":
        return lambda model, x, seed, iid=None: explain_vanilla_gradient(model, x, cfg.grad, iid)
    if method == "grad_x_input":
        return lambda model, x, seed, iid=None: explain_gradient_x_input(model, x, iid)
    if method == "smoothgrad":
        return lambda model, x, seed, iid=None: explain_smoothgrad(model, x, cfg.smoothgrad, seed, iid)
    if method == "integrated_gradients":
        def _ig(model, x, seed, iid=None):
            baseline = resolve_baseline(cfg.ig.baseline, train_X, np.asarray(x).size)
            return explain_integrated_gradients(model, x, cfg.ig, baseline, iid)

        return _ig
    if method == "lime":
        return lambda model, x, seed, iid=None: explain_lime(model, x, cfg.lime, seed, instance_id=iid)
    if method == "kernel_shap":
        def _ks(model, x, seed, iid=None):
            baseline = resolve_baseline(cfg.shap.baseline, train_X, np.asarray(x).size)
            return explain_kernel_shap(model, x, cfg.shap, baseline, seed, iid)

        return _ks
    raise ExplainerError(f"unknown explainer {method!r}; expected one of {METHODS}")


__all__ = [
    "METHODS",
    "Explanation",
    "ExplainerConfig",
    "ExplainerConfigError",
    "ExplainerError",
    "GradConfig",
    "IntegratedGradientsConfig",
    "KernelShapConfig",
    "LimeConfig",
    "SmoothGradConfig",
    "explain_gradient_x_input",
    "explain_integrated_gradients",
    "explain_kernel_shap",
    "explain_lime",
    "explain_random",
    "explain_smoothgrad",
    "explain_vanilla_gradient",
    "make_explainer",
    "read_csv",
    "read_jsonl",
    "resolve_baseline",
    "shapley_kernel_weight",
    "write_csv",
    "write_jsonl",
]
