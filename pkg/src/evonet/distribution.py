from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class DegreeDistribution:
    """Probability mass over degrees ``0..len(p)-1``.

    ``meta`` carries provenance (method, parameters, S, t, ...). ``stderr`` is
    only set for ensemble averages.
    """

    p: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)
    stderr: np.ndarray | None = None

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        if self.p.ndim != 1:
            raise ValueError("degree distribution must be one-dimensional")
        if self.stderr is not None:
            self.stderr = np.asarray(self.stderr, dtype=float)
            if self.stderr.shape != self.p.shape:
                raise ValueError("stderr must have the same shape as p")

    @property
    def k_max(self) -> int:
        return len(self.p) - 1

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(len(self.p))

    def __getitem__(self, k: int) -> float:
        if 0 <= k < len(self.p):
            return float(self.p[k])
        return 0.0

    def total(self) -> float:
        return float(np.sum(self.p))

    def mean_degree(self) -> float:
        return float(np.dot(self.degrees, self.p))

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(max(length, len(self.p)))
        out[: len(self.p)] = self.p
        return out

    def conditioned_nonzero(self) -> DegreeDistribution:
        """Renormalize over k >= 1, i.e. the distribution among non-isolated nodes."""
        q = self.p.copy()
        q[0] = 0.0
        s = q.sum()
        if s <= 0:
            raise ValueError("no mass on degrees >= 1")
        meta = dict(self.meta, conditioned="k>=1")
        return DegreeDistribution(q / s, meta)

    def trimmed(self) -> DegreeDistribution:
        """Drop trailing zero entries (keeps at least degree 0)."""
        nz = np.flatnonzero(self.p)
        n = int(nz[-1]) + 1 if len(nz) else 1
        se = None if self.stderr is None else self.stderr[:n]
        return DegreeDistribution(self.p[:n].copy(), dict(self.meta), se)
