from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


class ExplainerError(ValueError):
    pass


@dataclass
class Explanation:
    """A signed per-feature attribution for one instance."""

    attributions: np.ndarray
    method: str
    instance_id: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        a = np.asarray(self.attributions, dtype=np.float64).reshape(-1)
        if a.size == 0:
            raise ExplainerError("empty attribution vector")
        if not np.isfinite(a).all():
            raise ExplainerError(f"non-finite attributions from {self.method}")
        self.attributions = a

    @property
    def dim(self) -> int:
        return self.attributions.size
