from .aggregation import MetricResult, aggregate, subgroup_disparity, with_subgroups
from .agreement import (
    AGREEMENT_MODES,
    FA,
    RA,
    SA,
    SRA,
    MetricError,
    TopKConfig,
    auc_over_k,
    magnitude_order,
    pairwise_rank_agreement,
    rank_correlation,
    topk_agreement,
)
from .faithfulness import (
    GAP_MODES,
    PGI,
    PGU,
    prediction_gap,
    prediction_gap_auc,
    prediction_gap_curve,
)
from .perturbations import PerturbationConfig, perturb_batch, perturb_instance
from .stability import (
    RIS,
    ROS,
    RRS,
    STABILITY_MODES,
    StabilityConfig,
    percent_change,
    relative_stability,
    relative_stability_all,
)

BASE_METRICS = ("FA", "RA", "SA", "SRA", "RC", "PRA", "PGI", "PGU", "RIS", "RRS", "ROS")
FAIRNESS_METRICS = tuple(f"{m}_disp" for m in BASE_METRICS)
ALL_METRICS = BASE_METRICS + FAIRNESS_METRICS

__all__ = [
    "AGREEMENT_MODES",
    "ALL_METRICS",
    "BASE_METRICS",
    "FA",
    "FAIRNESS_METRICS",
    "GAP_MODES",
    "MetricError",
    "MetricResult",
    "PGI",
    "PGU",
    "PerturbationConfig",
    "RA",
    "RIS",
    "ROS",
    "RRS",
    "SA",
    "SRA",
    "STABILITY_MODES",
    "StabilityConfig",
    "TopKConfig",
    "aggregate",
    "auc_over_k",
    "magnitude_order",
    "pairwise_rank_agreement",
    "perturb_batch",
    "perturb_instance",
    "percent_change",
    "prediction_gap",
    "prediction_gap_auc",
    "prediction_gap_curve",
    "rank_correlation",
    "relative_stability",
    "relative_stability_all",
    "subgroup_disparity",
    "topk_agreement",
    "with_subgroups",
]
