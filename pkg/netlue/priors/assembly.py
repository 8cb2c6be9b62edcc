"""Outcome covariance assembly, integrated variance and prior sampling."""

from __future__ import annotations

import logging
from typing import Iterator

import numpy as np

from netlue.core.config import DEFAULT_SOLVER_CONFIG
from netlue.core.errors import ErrorCode, NetlueError
from netlue.designs.design import Design
from netlue.estimators.weights import WeightScheme
from netlue.graphs.graph import (
    Graph,
    component_labels,
    shared_neighbor_graph,
    treated_degrees,
)
from netlue.models.kinds import ModelKind
from netlue.models.params import ParamSet
from netlue.priors.prior import (
    ALPHA,
    BETA,
    ConstantPrior,
    CustomPrior,
    PriorCov,
    SanasiaPrior,
    UncorrelatedPrior,
    beta_total,
    delta_index,
    family_count,
    family_position,
    gamma_index,
)

LOGGER = logging.getLogger(__name__)


def _check_dimensions(prior: PriorCov, g: Graph) -> None:
    if prior.n != g.n:
        raise NetlueError(
            ErrorCode.INVALID_PRIOR, f"prior has n={prior.n}, graph has n={g.n}"
        )


def selectors(g: Graph, allocations: np.ndarray) -> np.ndarray:
    """Family selector S[k, i, f] so that Y_i(z_k) = sum_f S[k, i, f] * theta_i[f]."""
    rows = np.atleast_2d(np.asarray(allocations, dtype=np.int64))
    k, n = rows.shape
    degrees = treated_degrees(g, rows)
    selector = np.zeros((k, n, family_count(n)), dtype=np.float64)
    grid_k, grid_i = np.meshgrid(np.arange(k), np.arange(n), indexing="ij")
    selector[:, :, ALPHA] = 1.0
    selector[:, :, BETA] = rows
    selector[grid_k, grid_i, gamma_index(degrees)] = 1.0
    selector[grid_k, grid_i, delta_index(n, degrees)] = rows
    # Gamma(0) and Delta(0) are identically zero.
    selector[:, :, gamma_index(0)] = 0.0
    selector[:, :, delta_index(n, 0)] = 0.0
    return selector


def _sanasia_terms(prior: SanasiaPrior, g: Graph, rows: np.ndarray) -> tuple[
    np.ndarray, np.ndarray, np.ndarray
]:
    labels = component_labels(shared_neighbor_graph(g))
    degrees = treated_degrees(g, rows).astype(np.float64)
    base = prior.var_alpha[None, :] + prior.var_beta[None, :] * rows
    return labels, degrees, base


def diagonal_variances(prior: PriorCov, g: Graph, allocations: np.ndarray) -> np.ndarray:
    """Var Y_i(z_k) for each allocation row, shape (k, n)."""
    _check_dimensions(prior, g)
    rows = np.atleast_2d(np.asarray(allocations, dtype=np.int64))
    if isinstance(prior, SanasiaPrior):
        labels, degrees, base = _sanasia_terms(prior, g, rows)
        onehot = np.eye(int(labels.max()) + 1)[labels]
        component_sums = (degrees @ onehot)[:, labels]
        if prior.diagonal_surrogate:
            return base + prior.var_gamma * degrees * component_sums
        return base + prior.var_gamma * degrees**2
    selector = selectors(g, rows)
    if isinstance(prior, UncorrelatedPrior):
        return np.einsum("kif,ifg,kig->ki", selector, prior.unit_blocks, selector)
    if isinstance(prior, ConstantPrior):
        return np.einsum("kif,fg,kig->ki", selector, prior.block, selector) + prior.jitter
    total = np.zeros(rows.shape, dtype=np.float64)
    for name, block in prior.blocks.items():
        column = selector[:, :, family_position(prior.n, name)]
        total += column**2 * np.diag(block)[None, :]
    return total


def is_diagonal(prior: PriorCov) -> bool:
    """True when Sigma(z) is diagonal for every allocation."""
    if isinstance(prior, UncorrelatedPrior):
        return True
    if isinstance(prior, SanasiaPrior):
        return prior.diagonal_surrogate
    return False


def assemble_sigma_stack(prior: PriorCov, g: Graph, allocations: np.ndarray) -> np.ndarray:
    """Sigma(z_k) = Cov(Y(z_k)) for each allocation row, shape (k, n, n)."""
    _check_dimensions(prior, g)
    rows = np.atleast_2d(np.asarray(allocations, dtype=np.int64))
    k, n = rows.shape
    if is_diagonal(prior):
        stack = np.zeros((k, n, n), dtype=np.float64)
        idx = np.arange(n)
        stack[:, idx, idx] = diagonal_variances(prior, g, rows)
        return stack
    if isinstance(prior, SanasiaPrior):
        labels, degrees, base = _sanasia_terms(prior, g, rows)
        same = (labels[:, None] == labels[None, :]).astype(np.float64)
        stack = prior.var_gamma * degrees[:, :, None] * degrees[:, None, :] * same
        idx = np.arange(n)
        stack[:, idx, idx] += base
        return stack
    selector = selectors(g, rows)
    if isinstance(prior, ConstantPrior):
        stack = np.einsum("kif,fg,kjg->kij", selector, prior.block, selector, optimize=True)
        stack += prior.jitter * np.eye(n)[None, :, :]
        return stack
    stack = np.zeros((k, n, n), dtype=np.float64)
    for name, block in prior.blocks.items():
        column = selector[:, :, family_position(prior.n, name)]
        stack += column[:, :, None] * block[None, :, :] * column[:, None, :]
    return stack


def assemble_sigma_z(prior: PriorCov, g: Graph, z: np.ndarray) -> np.ndarray:
    return assemble_sigma_stack(prior, g, np.atleast_2d(z))[0]


def sigma_chunks(
    prior: PriorCov, g: Graph, d: Design, chunk_size: int
) -> Iterator[tuple[slice, np.ndarray]]:
    """Yield (support slice, Sigma stack) pairs of at most chunk_size allocations."""
    for start in range(0, d.size, chunk_size):
        window = slice(start, min(start + chunk_size, d.size))
        yield window, assemble_sigma_stack(prior, g, d.support[window])


def integrated_variance(
    ws: WeightScheme,
    d: Design,
    prior: PriorCov,
    g: Graph,
    chunk_size: int = DEFAULT_SOLVER_CONFIG.chunk_size,
) -> float:
    """Prior-averaged variance of an unbiased estimator."""
    ws.require_design(d)
    total = 0.0
    for window, stack in sigma_chunks(prior, g, d, chunk_size):
        w = ws.weights[window]
        quad = np.einsum("ki,kij,kj->k", w, stack, w)
        total += float(d.pmf[window] @ quad)
    return total - beta_total(prior) / d.n**2


def _family_draws(
    prior: UncorrelatedPrior | ConstantPrior | CustomPrior,
    draws: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Family values theta[draw, unit, family]."""
    n = prior.n
    size = family_count(n)
    if isinstance(prior, UncorrelatedPrior):
        theta = np.empty((draws, n, size), dtype=np.float64)
        for i in range(n):
            theta[:, i, :] = rng.multivariate_normal(
                np.zeros(size), prior.unit_blocks[i], size=draws, method="eigh"
            )
        return theta
    if isinstance(prior, ConstantPrior):
        shared = rng.multivariate_normal(
            np.zeros(size), prior.block, size=draws, method="eigh"
        )
        theta = np.repeat(shared[:, None, :], n, axis=1)
        if prior.jitter > 0:
            theta[:, :, ALPHA] += rng.normal(0.0, np.sqrt(prior.jitter), size=(draws, n))
        return theta
    theta = np.zeros((draws, n, size), dtype=np.float64)
    for name, block in sorted(prior.blocks.items()):
        theta[:, :, family_position(n, name)] = rng.multivariate_normal(
            np.zeros(n), block, size=draws, method="eigh"
        )
    return theta


def _sanasia_draw(
    prior: SanasiaPrior, g: Graph, rng: np.random.Generator
) -> ParamSet:
    labels = component_labels(shared_neighbor_graph(g))
    per_component = rng.normal(0.0, np.sqrt(prior.var_gamma), size=int(labels.max()) + 1)
    return ParamSet(
        kind=ModelKind.SANASIA,
        alpha=rng.normal(0.0, np.sqrt(prior.var_alpha)),
        beta=rng.normal(0.0, np.sqrt(prior.var_beta)),
        gamma=per_component[labels],
    )


def _uses_delta(prior: PriorCov) -> bool:
    n = prior.n
    deltas = np.arange(delta_index(n, 1), family_count(n))
    if isinstance(prior, UncorrelatedPrior):
        return bool(np.any(prior.unit_blocks[:, deltas][:, :, deltas] != 0.0))
    if isinstance(prior, ConstantPrior):
        return bool(np.any(prior.block[np.ix_(deltas, deltas)] != 0.0))
    if isinstance(prior, CustomPrior):
        return any(name.startswith("delta:") for name in prior.blocks)
    return False


def _is_sutva(prior: PriorCov) -> bool:
    return str(prior.kind).startswith("sutva")


def sample_prior_params(prior: PriorCov, g: Graph, seed: int) -> ParamSet:
    """Draw one parameter set from a zero-mean Gaussian prior.

    The returned kind is the tightest one the prior covers: SUTVA, SANIA,
    SNIA when Delta terms carry variance, or SANASIA.
    """
    _check_dimensions(prior, g)
    rng = np.random.default_rng(seed)
    if isinstance(prior, SanasiaPrior):
        return _sanasia_draw(prior, g, rng)
    theta = _family_draws(prior, 1, rng)[0]
    n = prior.n
    if _is_sutva(prior):
        return ParamSet(kind=ModelKind.SUTVA, alpha=theta[:, ALPHA], beta=theta[:, BETA])
    gamma = theta[:, gamma_index(0) : gamma_index(n)].copy()
    gamma[:, 0] = 0.0
    if _uses_delta(prior):
        delta = theta[:, delta_index(n, 0) : delta_index(n, n)].copy()
        delta[:, 0] = 0.0
        return ParamSet(
            kind=ModelKind.SNIA,
            alpha=theta[:, ALPHA],
            beta=theta[:, BETA],
            gamma=gamma,
            delta=delta,
        )
    return ParamSet(
        kind=ModelKind.SANIA, alpha=theta[:, ALPHA], beta=theta[:, BETA], gamma=gamma
    )


def draw_outcomes(
    prior: PriorCov, g: Graph, z: np.ndarray, draws: int, seed: int
) -> np.ndarray:
    """Monte Carlo draws of Y(z) under the prior, shape (draws, n).

    A SANASIA prior is always sampled from its exact model, also when it is
    flagged as a diagonal surrogate.
    """
    _check_dimensions(prior, g)
    rng = np.random.default_rng(seed)
    row = np.atleast_2d(np.asarray(z, dtype=np.int64))
    if isinstance(prior, SanasiaPrior):
        labels = component_labels(shared_neighbor_graph(g))
        degrees = treated_degrees(g, row)[0].astype(np.float64)
        alpha = rng.normal(0.0, np.sqrt(prior.var_alpha), size=(draws, prior.n))
        beta = rng.normal(0.0, np.sqrt(prior.var_beta), size=(draws, prior.n))
        slopes = rng.normal(
            0.0, np.sqrt(prior.var_gamma), size=(draws, int(labels.max()) + 1)
        )
        return alpha + beta * row[0] + slopes[:, labels] * degrees
    theta = _family_draws(prior, draws, rng)
    selector = selectors(g, row)[0]
    return np.einsum("if,dif->di", selector, theta)
