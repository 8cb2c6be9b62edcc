"""KKT system for the minimum-integrated-variance problem.

Unknowns are the flattened weights w[z, i] followed by one multiplier per
constraint row. Stationarity reads Sigma(z) w(z) + A_z^T lambda = 0 for every
supported z, where A_z holds the constraint coefficients without the design
probabilities; feasibility reads A w = b with the probabilities included.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np
import scipy.sparse as sp

from netlue.core.config import DEFAULT_SOLVER_CONFIG
from netlue.core.linalg import min_norm_solve
from netlue.designs.design import Design
from netlue.estimators.weights import WeightScheme
from netlue.graphs.graph import Graph
from netlue.models.kinds import ModelKind
from netlue.priors.assembly import sigma_chunks
from netlue.priors.prior import PriorCov
from netlue.solver.report import SolveReport
from netlue.unbiasedness.constraints import ConstraintSystem, build_constraints

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class KKTSystem:
    constraints: ConstraintSystem
    prior: PriorCov
    g: Graph
    chunk_size: int = DEFAULT_SOLVER_CONFIG.chunk_size

    @property
    def design(self) -> Design:
        return self.constraints.design

    @property
    def n(self) -> int:
        return self.constraints.n

    @property
    def support_size(self) -> int:
        return self.design.size

    @property
    def multiplier_count(self) -> int:
        return self.constraints.row_count

    def sigma_blocks(self) -> Iterator[tuple[slice, np.ndarray]]:
        return sigma_chunks(self.prior, self.g, self.design, self.chunk_size)

    def transposed_coefficients(self, multipliers: np.ndarray) -> np.ndarray:
        """A_z^T lambda for every allocation, shape (m, n)."""
        flat = self.constraints.coefficients.T @ np.asarray(multipliers, dtype=np.float64)
        return np.asarray(flat).reshape(self.support_size, self.n)

    def assemble(self) -> tuple[sp.csr_matrix, np.ndarray]:
        """Full square system [[Sigma, A_z^T], [A, 0]] and its right-hand side."""
        n, m = self.n, self.support_size
        rows, cols, vals = [], [], []
        for window, stack in self.sigma_blocks():
            k, i, j = np.nonzero(stack)
            offset = (window.start + k) * n
            rows.append(offset + i)
            cols.append(offset + j)
            vals.append(stack[k, i, j])
        sigma = sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(m * n, m * n),
        )
        coefficients = self.constraints.coefficients
        zero = sp.csr_matrix((self.multiplier_count, self.multiplier_count))
        full = sp.bmat(
            [[sigma, coefficients.T], [self.constraints.matrix, zero]], format="csr"
        )
        rhs = np.concatenate([np.zeros(m * n), self.constraints.rhs])
        return full, rhs


def build_kkt_system(
    kind: ModelKind,
    g: Graph,
    d: Design,
    prior: PriorCov,
    chunk_size: int = DEFAULT_SOLVER_CONFIG.chunk_size,
) -> KKTSystem:
    return KKTSystem(
        constraints=build_constraints(kind, g, d),
        prior=prior,
        g=g,
        chunk_size=chunk_size,
    )


def stationarity_residual(
    system: KKTSystem, weights: WeightScheme, multipliers: np.ndarray
) -> np.ndarray:
    """Sigma(z) w(z) + A_z^T lambda, shape (m, n)."""
    residual = system.transposed_coefficients(multipliers).copy()
    for window, stack in system.sigma_blocks():
        residual[window] += np.einsum("kij,kj->ki", stack, weights.weights[window])
    return residual


def residual_at(
    weights: WeightScheme, multipliers: np.ndarray, system: KKTSystem
) -> float:
    """Max-norm of stationarity and feasibility residuals relative to max |b|."""
    weights.require_design(system.design)
    stationarity = np.abs(stationarity_residual(system, weights, multipliers)).max()
    feasibility = (
        np.abs(system.constraints.matrix @ weights.flat() - system.constraints.rhs).max()
        if system.multiplier_count
        else 0.0
    )
    scale = float(np.abs(system.constraints.rhs).max()) or 1.0
    return float(max(stationarity, feasibility) / scale)


def recover_multipliers(
    system: KKTSystem,
    weights: WeightScheme,
    dense_limit: int = DEFAULT_SOLVER_CONFIG.dense_limit,
) -> np.ndarray:
    """Least-squares multipliers for weights produced without them."""
    target = np.zeros((system.support_size, system.n), dtype=np.float64)
    for window, stack in system.sigma_blocks():
        target[window] = -np.einsum("kij,kj->ki", stack, weights.weights[window])
    transposed = sp.csr_matrix(system.constraints.coefficients.T)
    return min_norm_solve(transposed, target.reshape(-1), dense_limit)


def kkt_residual(report: SolveReport, system: KKTSystem) -> float:
    return residual_at(report.weights, report.multipliers, system)
