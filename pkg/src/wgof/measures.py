"""Weighted point clouds."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported probability measure on R^d.

    Parameters
    ----------
    points : array_like, shape (n, d)
        Atom locations.
    weights : array_like, shape (n,), optional
        Probability weights; uniform ``1/n`` when omitted.
    """

    points: np.ndarray
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2:
            raise DomainError("points must be an (n, d) array")
        if not np.all(np.isfinite(pts)):
            raise DomainError("points must be finite")
        n = pts.shape[0]
        if self.weights is None:
            w = np.full(n, 1.0 / n) if n else np.zeros(0)
        else:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (n,):
                raise DomainError("weights must have one entry per point")
            if np.any(w < 0) or (n and abs(w.sum() - 1.0) > 1e-12):
                raise DomainError("weights must be non-negative and sum to 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n


def as_measure(x) -> DiscreteMeasure:
    """Wrap an array as a uniform-weight measure; pass measures through."""
    return x if isinstance(x, DiscreteMeasure) else DiscreteMeasure(np.asarray(x, dtype=float))
