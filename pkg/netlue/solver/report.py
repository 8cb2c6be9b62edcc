from __future__ import annotations

from dataclasses import dataclass
from netlue._compat import StrEnum

import numpy as np

from netlue.estimators.weights import WeightScheme
from netlue.models.kinds import ModelKind
from netlue.unbiasedness.constraints import ConstraintLabel


class SolvePath(StrEnum):
    GENERAL_PINV = "general_pinv"
    NONSINGULAR = "nonsingular"
    SANIA_UNCORRELATED = "sania_uncorrelated"
    NIA_UNCORRELATED = "nia_uncorrelated"
    SANASIA_CLOSED = "sanasia_closed"
    VERTEX_TRANSITIVE = "vertex_transitive"


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Optimal weights with the multipliers and residual that certify them."""

    kind: ModelKind
    weights: WeightScheme
    multipliers: np.ndarray
    labels: tuple[ConstraintLabel, ...]
    kkt_residual: float
    path_used: SolvePath

    def to_metadata(self) -> dict[str, str]:
        return {
            "kind": str(self.kind),
            "path_used": str(self.path_used),
            "kkt_residual": f"{self.kkt_residual:.6e}",
            "multipliers": " ".join(format(v, ".17g") for v in self.multipliers),
        }
