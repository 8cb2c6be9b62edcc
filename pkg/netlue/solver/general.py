"""General and nonsingular KKT solvers."""

from __future__ import annotations

import logging

import numpy as np
import scipy.linalg

from netlue.core.config import DEFAULT_SOLVER_CONFIG, SolverConfig
from netlue.core.errors import ErrorCode, NetlueError
from netlue.core.linalg import RCOND, min_norm_solve, row_normalized
from netlue.designs.design import Design
from netlue.estimators.weights import WeightScheme
from netlue.graphs.graph import Graph
from netlue.models.kinds import ModelKind
from netlue.priors.assembly import diagonal_variances, is_diagonal, sigma_chunks
from netlue.priors.prior import PriorCov
from netlue.solver.kkt import KKTSystem, build_kkt_system, residual_at
from netlue.solver.report import SolvePath, SolveReport
from netlue.unbiasedness.constraints import check_unbiased

LOGGER = logging.getLogger(__name__)


def finalize(
    system: KKTSystem,
    weights: WeightScheme,
    multipliers: np.ndarray,
    path: SolvePath,
    config: SolverConfig,
) -> SolveReport:
    """Verify unbiasedness and the KKT residual, then wrap the solution."""
    verdict = check_unbiased(weights, system.constraints, tol=config.tol_unbiased)
    if not verdict.unbiased:
        raise NetlueError(
            ErrorCode.INFEASIBLE,
            f"no unbiased weights: violation {verdict.max_violation:.3e} "
            f"at {verdict.worst_label}",
        )
    residual = residual_at(weights, multipliers, system)
    LOGGER.debug(
        "Solved %s",
        system.constraints.kind,
        extra={
            "path_used": str(path),
            "kkt_residual": residual,
            "support_size": system.support_size,
        },
    )
    if not residual < config.tol_kkt:
        raise NetlueError(
            ErrorCode.RESIDUAL_CHECK_FAILED,
            f"{path} solution is not a KKT point (residual {residual:.3e})",
        )
    return SolveReport(
        kind=system.constraints.kind,
        weights=weights,
        multipliers=np.asarray(multipliers, dtype=np.float64),
        labels=system.constraints.labels,
        kkt_residual=residual,
        path_used=path,
    )


def solve_general(
    kind: ModelKind,
    g: Graph,
    d: Design,
    prior: PriorCov,
    config: SolverConfig = DEFAULT_SOLVER_CONFIG,
) -> SolveReport:
    """Solve the full KKT system by minimum-norm least squares.

    Works for singular covariances; the result is only accepted when it is a
    KKT point within tolerance.
    """
    system = build_kkt_system(kind, g, d, prior, config.chunk_size)
    matrix, rhs = system.assemble()
    scaled_matrix, scaled_rhs = row_normalized(matrix, rhs)
    solution = min_norm_solve(scaled_matrix, scaled_rhs, config.dense_limit)
    split = d.size * d.n
    weights = WeightScheme.on(d, solution[:split].reshape(d.size, d.n))
    return finalize(system, weights, solution[split:], SolvePath.GENERAL_PINV, config)


def _check_blocks(stack: np.ndarray, n: int, rtol: float) -> bool:
    smallest = np.linalg.eigvalsh(stack)[:, 0]
    floor = rtol * np.trace(stack, axis1=1, axis2=2) / n
    return bool(np.all(smallest > floor))


def is_nonsingular(
    prior: PriorCov,
    g: Graph,
    d: Design,
    config: SolverConfig = DEFAULT_SOLVER_CONFIG,
) -> bool:
    """Every Sigma(z) on the support has min eigenvalue above rtol * trace / n."""
    if is_diagonal(prior):
        variances = diagonal_variances(prior, g, d.support)
        floor = config.singular_rtol * variances.sum(axis=1) / d.n
        return bool(np.all(variances.min(axis=1) > floor))
    return all(
        _check_blocks(stack, d.n, config.singular_rtol)
        for _, stack in sigma_chunks(prior, g, d, config.chunk_size)
    )


def solve_nonsingular(
    kind: ModelKind,
    g: Graph,
    d: Design,
    prior: PriorCov,
    config: SolverConfig = DEFAULT_SOLVER_CONFIG,
) -> SolveReport:
    """Eliminate the weights through Sigma(z)^-1 and solve the reduced multiplier system."""
    system = build_kkt_system(kind, g, d, prior, config.chunk_size)
    n, rows = d.n, system.multiplier_count
    coefficients = system.constraints.coefficients.tocsc()

    def transposed_block(window: slice) -> np.ndarray:
        block = coefficients[:, window.start * n : window.stop * n].toarray()
        return block.reshape(rows, window.stop - window.start, n).transpose(1, 2, 0)

    reduced = np.zeros((rows, rows), dtype=np.float64)
    for window, stack in system.sigma_blocks():
        if not _check_blocks(stack, n, config.singular_rtol):
            raise NetlueError(
                ErrorCode.SINGULAR_COVARIANCE,
                "a covariance block is singular, use the general solver",
            )
        transposed = transposed_block(window)
        reduced += np.einsum(
            "k,kir,kis->rs",
            d.pmf[window],
            transposed,
            np.linalg.solve(stack, transposed),
            optimize=True,
        )

    multipliers, _, _, _ = scipy.linalg.lstsq(
        reduced, -system.constraints.rhs, cond=RCOND, lapack_driver="gelsd"
    )
    weights = np.empty((d.size, n), dtype=np.float64)
    for window, stack in system.sigma_blocks():
        pulled = transposed_block(window) @ multipliers
        weights[window] = -np.linalg.solve(stack, pulled[:, :, None])[:, :, 0]
    return finalize(
        system,
        WeightScheme.on(d, weights),
        multipliers,
        SolvePath.NONSINGULAR,
        config,
    )
