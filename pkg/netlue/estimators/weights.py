from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from netlue.core.errors import ErrorCode, NetlueError
from netlue.designs.design import Design


@dataclass(frozen=True, eq=False)
class WeightScheme:
    """Linear estimator: one weight vector per supported allocation."""

    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        support = np.atleast_2d(np.asarray(self.support, dtype=np.uint8))
        weights = np.atleast_2d(np.asarray(self.weights, dtype=np.float64))
        if support.shape != weights.shape:
            raise NetlueError(
                ErrorCode.INVALID_DESIGN,
                f"weights {weights.shape} do not match support {support.shape}",
            )
        if not np.all(np.isfinite(weights)):
            raise NetlueError(ErrorCode.INVALID_DESIGN, "weights must be finite")
        support = support.copy()
        weights = weights.copy()
        support.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", weights)

    @staticmethod
    def on(design: Design, weights: np.ndarray) -> "WeightScheme":
        return WeightScheme(design.support, weights)

    @property
    def n(self) -> int:
        return int(self.support.shape[1])

    def matches(self, design: Design) -> bool:
        return self.support.shape == design.support.shape and bool(
            np.array_equal(self.support, design.support)
        )

    def require_design(self, design: Design) -> None:
        if not self.matches(design):
            raise NetlueError(
                ErrorCode.INVALID_DESIGN, "weight scheme is not defined on this support"
            )

    def weights_for(self, z: Sequence[int] | np.ndarray) -> np.ndarray:
        row = np.asarray(z, dtype=np.uint8)
        hits = np.flatnonzero(np.all(self.support == row, axis=1))
        if hits.size == 0:
            raise NetlueError(ErrorCode.INVALID_ALLOCATION, f"{row.tolist()} not supported")
        return self.weights[int(hits[0])]

    def estimate(self, z: Sequence[int] | np.ndarray, outcomes: np.ndarray) -> float:
        """Weighted sum of observed outcomes under allocation z."""
        return float(self.weights_for(z) @ np.asarray(outcomes, dtype=np.float64))

    def estimates(self, outcomes: np.ndarray) -> np.ndarray:
        """Estimates for an outcome matrix aligned with the support."""
        return np.einsum("zi,zi->z", self.weights, outcomes)

    def flat(self) -> np.ndarray:
        return self.weights.reshape(-1)
