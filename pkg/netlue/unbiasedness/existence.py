"""Deciders for the existence of linear unbiased estimators."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from netlue.core.config import DEFAULT_SOLVER_CONFIG
from netlue.core.linalg import min_norm_solve, row_normalized
from netlue.designs.design import Design
from netlue.graphs.graph import Graph, treated_degrees
from netlue.models.kinds import ModelKind
from netlue.unbiasedness.constraints import build_constraints

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExistenceReport:
    """Verdict plus the first unit violating the condition, if any."""

    exists: bool
    witness: int | None
    condition: str
    residual: float | None = None

    def __bool__(self) -> bool:
        return self.exists

    def to_record(self) -> dict[str, str]:
        record = {
            "condition": self.condition,
            "exists": str(self.exists).lower(),
        }
        if self.witness is not None:
            record["witness_unit"] = str(self.witness)
        if self.residual is not None:
            record["residual"] = f"{self.residual:.3e}"
        return record


def exists_nia(g: Graph, d: Design) -> ExistenceReport:
    """Every unit is seen treated and in control with no treated neighbors."""
    support = d.support.astype(np.int64)
    isolated = treated_degrees(g, support) == 0
    for i in range(d.n):
        treated = support[:, i] == 1
        if not (np.any(isolated[:, i] & treated) and np.any(isolated[:, i] & ~treated)):
            return ExistenceReport(exists=False, witness=i, condition="nia")
    return ExistenceReport(exists=True, witness=None, condition="nia")


def exists_sania(g: Graph, d: Design) -> ExistenceReport:
    """Every unit is seen in both arms at some common treated degree."""
    support = d.support.astype(np.int64)
    degrees = treated_degrees(g, support)
    for i in range(d.n):
        treated = support[:, i] == 1
        shared = np.intersect1d(degrees[treated, i], degrees[~treated, i])
        if shared.size == 0:
            return ExistenceReport(exists=False, witness=i, condition="sania")
    return ExistenceReport(exists=True, witness=None, condition="sania")


def exists_by_feasibility(
    kind: ModelKind,
    g: Graph,
    d: Design,
    tol: float = 1e-8,
    dense_limit: int = DEFAULT_SOLVER_CONFIG.dense_limit,
) -> ExistenceReport:
    """Decide feasibility of the constraint system by a least-squares solve."""
    system = build_constraints(kind, g, d)
    matrix, rhs = row_normalized(system.matrix, system.rhs)
    solution = min_norm_solve(matrix, rhs, dense_limit)
    residual = np.abs(matrix @ solution - rhs)
    scale = float(np.max(np.abs(rhs))) if rhs.size else 1.0
    relative = float(residual.max() / scale) if residual.size else 0.0
    witness = None
    if relative >= tol:
        worst = system.labels[int(np.argmax(residual))]
        witness = worst.unit
    LOGGER.debug("Feasibility residual %.3e for %s", relative, kind)
    return ExistenceReport(
        exists=relative < tol,
        witness=witness,
        condition=f"feasibility:{ModelKind(kind)}",
        residual=relative,
    )
