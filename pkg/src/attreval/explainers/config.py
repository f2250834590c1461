"""Per-method hyperparameters, bundled behind one config object."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class ExplainerConfigError(ValueError):
    pass


@dataclass
class GradConfig:
    absolute_value: bool = False


@dataclass
class SmoothGradConfig:
    n_samples: int = 500
    std: float = math.sqrt(0.05)

    def __post_init__(self):
        if self.n_samples < 1:
            raise ExplainerConfigError("smoothgrad needs n_samples >= 1")
        if self.std < 0:
            raise ExplainerConfigError("smoothgrad std must be >= 0")


@dataclass
class IntegratedGradientsConfig:
    method: str = "gauss-legendre"
    n_steps: int = 50
    baseline: str = "mean"  # "mean" (train feature means) or "zero"
    multiply_by_inputs: bool = False

    def __post_init__(self):
        if self.method != "gauss-legendre":
            raise ExplainerConfigError(f"unsupported quadrature {self.method!r}")
        if self.n_steps < 1:
            raise ExplainerConfigError("need n_steps >= 1")
        if self.baseline not in ("mean", "zero"):
            raise ExplainerConfigError(f"unsupported baseline {self.baseline!r}")


@dataclass
class LimeConfig:
    n_samples: int = 1000
    kernel_width: float = 0.75
    sample_std: float = math.sqrt(0.05)
    discretize: bool = False
    sample_around_instance: bool = True
    ridge: float = 1e-8

    def __post_init__(self):
        if self.n_samples < 1:
            raise ExplainerConfigError("lime needs n_samples >= 1")
        if self.kernel_width <= 0:
            raise ExplainerConfigError("kernel width must be positive")
        if self.discretize:
            raise ExplainerConfigError("discretized sampling is not supported")


@dataclass
class KernelShapConfig:
    subset_size: int = 50
    baseline: str = "zero"  # "zero" or "mean"
    exhaustive: bool = False
    anchor_weight: float = 1e6  # enforces the empty/full coalitions

    def __post_init__(self):
        if self.subset_size < 1:
            raise ExplainerConfigError("kernel shap needs subset_size >= 1")
        if self.baseline not in ("zero", "mean"):
            raise ExplainerConfigError(f"unsupported baseline {self.baseline!r}")


@dataclass
class ExplainerConfig:
    grad: GradConfig = field(default_factory=GradConfig)
    smoothgrad: SmoothGradConfig = field(default_factory=SmoothGradConfig)
    ig: IntegratedGradientsConfig = field(default_factory=IntegratedGradientsConfig)
    lime: LimeConfig = field(default_factory=LimeConfig)
    shap: KernelShapConfig = field(default_factory=KernelShapConfig)
    seed: int = 0
