"""attreval: generate ground-truth tabular data, train small models,
explain their predictions with seven attribution methods, and score the
explanations on faithfulness, stability, and subgroup-fairness metrics."""

__version__ = "0.1.0"

from . import datasets, explainers, harness, metrics, models  # noqa: E402,F401
