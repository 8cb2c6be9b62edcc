"""Minimum-norm least-squares helpers shared by the constraint and KKT solvers."""

from __future__ import annotations

import logging

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import lsqr

LOGGER = logging.getLogger(__name__)

# Singular values below RCOND times the largest are treated as zero.
RCOND = 1e-10


def min_norm_solve(
    matrix: sp.spmatrix | np.ndarray, rhs: np.ndarray, dense_limit: int
) -> np.ndarray:
    """Minimum-norm least-squares solution of matrix @ x = rhs.

    Small systems go through a dense SVD-based solve with cutoff RCOND; larger
    ones through LSQR started at zero, which converges to the minimum-norm
    solution.
    """
    rows, cols = matrix.shape
    if rows * cols <= dense_limit:
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
        solution, _, _, _ = scipy.linalg.lstsq(
            dense, rhs, cond=RCOND, lapack_driver="gelsd"
        )
        return np.asarray(solution, dtype=np.float64)
    result = lsqr(
        sp.csr_matrix(matrix),
        rhs,
        atol=1e-15,
        btol=1e-15,
        conlim=1e16,
        iter_lim=20 * (rows + cols),
    )
    LOGGER.debug("lsqr finished with istop=%s after %s iterations", result[1], result[2])
    return np.asarray(result[0], dtype=np.float64)


def row_normalized(
    matrix: sp.csr_matrix, rhs: np.ndarray
) -> tuple[sp.csr_matrix, np.ndarray]:
    """Scale each nonzero row to unit Euclidean norm."""
    norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1)).reshape(-1))
    scale = np.divide(1.0, norms, out=np.ones_like(norms), where=norms > 0)
    return sp.csr_matrix(sp.diags(scale) @ matrix), rhs * scale
