"""Agreement between two attribution vectors: top-k overlap variants,
rank correlation, and pairwise order consistency.

Rankings are always over attribution magnitudes, descending, with ties
broken by ascending feature index so results are reproducible and match
a brute-force sort exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

FA = "FA"
RA = "RA"
SA = "SA"
SRA = "SRA"
AGREEMENT_MODES = (FA, RA, SA, SRA)


class MetricError(ValueError):
    pass


@dataclass
class TopKConfig:
    percentage_most_important: float = 0.25
    k: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.percentage_most_important <= 1.0:
            raise MetricError("percentage_most_important must be in (0, 1]")
        if self.k is not None and self.k < 1:
            raise MetricError("explicit k must be >= 1")

    def k_for(self, d: int) -> int:
        if self.k is not None:
            if self.k > d:
                raise MetricError(f"k={self.k} exceeds dimension {d}")
            return self.k
        return max(1, round(self.percentage_most_important * d))


def magnitude_order(v: np.ndarray) -> np.ndarray:
    """Feature indices sorted by |v| descending, index ascending on ties."""
    v = np.asarray(v, dtype=np.float64)
    return np.lexsort((np.arange(v.size), -np.abs(v)))


def _check_pair(e: np.ndarray, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    e = np.asarray(e, dtype=np.float64).reshape(-1)
    g = np.asarray(g, dtype=np.float64).reshape(-1)
    if e.size != g.size:
        raise MetricError(f"attribution lengths differ: {e.size} vs {g.size}")
    return e, g


def topk_agreement(e: np.ndarray, g: np.ndarray, k: int, mode: str) -> float:
    """Fraction of top-k features shared under the given matching rule.

    FA: same feature set. RA: same feature at the same rank. SA: shared
    feature with the same sign. SRA: same rank and same sign.
    """
    e, g = _check_pair(e, g)
    d = e.size
    if not 1 <= k <= d:
        raise MetricError(f"k must be in 1..{d}, got {k}")
    if mode not in AGREEMENT_MODES:
        raise MetricError(f"unknown agreement mode {mode!r}")
    top_e = magnitude_order(e)[:k]
    top_g = magnitude_order(g)[:k]
    if mode == FA:
        hits = np.intersect1d(top_e, top_g).size
    elif mode == RA:
        hits = int((top_e == top_g).sum())
    elif mode == SA:
        common = np.intersect1d(top_e, top_g)
        hits = int((np.sign(e[common]) == np.sign(g[common])).sum())
    else:  # SRA
        same_pos = top_e == top_g
        hits = int((same_pos & (np.sign(e[top_e]) == np.sign(g[top_e]))).sum())
    return hits / k


def rank_correlation(e: np.ndarray, g: np.ndarray) -> float:
    """Spearman rho between the magnitude rankings (average-rank ties)."""
    e, g = _check_pair(e, g)
    if e.size < 2:
        raise MetricError("rank correlation needs at least 2 features")
    rho = stats.spearmanr(np.abs(e), np.abs(g)).statistic
    return float(rho)


def pairwise_rank_agreement(e: np.ndarray, g: np.ndarray) -> float:
    """Fraction of feature pairs ordered the same way by |e| and |g|
    (ties must match as ties)."""
    e, g = _check_pair(e, g)
    d = e.size
    if d < 2:
        raise MetricError("pairwise rank agreement needs at least 2 features")
    ae, ag = np.abs(e), np.abs(g)
    iu, ju = np.triu_indices(d, k=1)
    order_e = np.sign(ae[iu] - ae[ju])
    order_g = np.sign(ag[iu] - ag[ju])
    return float(np.mean(order_e == order_g))


def auc_over_k(curve: np.ndarray) -> float:
    """Normalized trapezoidal area of a metric-vs-k curve, k = 1..d."""
    curve = np.asarray(curve, dtype=np.float64).reshape(-1)
    if curve.size == 0:
        raise MetricError("empty curve")
    if curve.size == 1:
        return float(curve[0])
    return float((curve[:-1] + curve[1:]).sum() / (2.0 * (curve.size - 1)))
