"""Closed-form optimal weights for uncorrelated and SANASIA priors."""

from __future__ import annotations

import logging
from typing import Literal

import numpy as np

from netlue.core.config import DEFAULT_SOLVER_CONFIG, SolverConfig
from netlue.core.errors import ErrorCode, NetlueError
from netlue.designs.design import Design, propensity_table
from netlue.estimators.weights import WeightScheme
from netlue.graphs.graph import (
    Graph,
    component_labels,
    shared_neighbor_graph,
    treated_degrees,
)
from netlue.models.kinds import ModelKind
from netlue.priors.assembly import diagonal_variances
from netlue.priors.prior import PriorCov, PriorKind, SanasiaPrior, UncorrelatedPrior
from netlue.solver.general import finalize
from netlue.solver.kkt import build_kkt_system, recover_multipliers
from netlue.solver.report import SolvePath, SolveReport
from netlue.unbiasedness.constraints import ConstraintFamily
from netlue.unbiasedness.existence import exists_nia, exists_sania

LOGGER = logging.getLogger(__name__)


def _infeasible(witness: int | None, condition: str) -> NetlueError:
    return NetlueError(
        ErrorCode.INFEASIBLE, f"no unbiased estimator: unit {witness} fails {condition}"
    )


def cell_variances(prior: UncorrelatedPrior, g: Graph, d: Design) -> np.ndarray:
    """V[z, i, deg] = Var Y_i for cells (z_i, d_i) seen in the support, else 0."""
    support = d.support.astype(np.int64)
    degrees = treated_degrees(g, support)
    variances = diagonal_variances(prior, g, support)
    units = np.broadcast_to(np.arange(d.n), support.shape)
    table = np.zeros((2, d.n, d.n), dtype=np.float64)
    table[support.ravel(), units.ravel(), degrees.ravel()] = variances.ravel()
    return table


def ht_scale(
    prior: UncorrelatedPrior,
    g: Graph,
    d: Design,
    method: Literal["cells", "support"] = "cells",
) -> np.ndarray:
    """Per-unit stratum scale C[i, deg]; zero where either arm is unobserved.

    "cells" uses the two-term propensity form, "support" sums over the design.
    """
    propensity = propensity_table(d, g)
    both = (propensity[0] > 0) & (propensity[1] > 0)
    if method == "cells":
        variances = cell_variances(prior, g, d)
        safe = np.where(both, propensity, 1.0)
        spread = np.where(both, variances[0] / safe[0] + variances[1] / safe[1], 1.0)
    else:
        support = d.support.astype(np.int64)
        degrees = treated_degrees(g, support)
        units = np.broadcast_to(np.arange(d.n), support.shape)
        cell = propensity[support, units, degrees]
        terms = d.pmf[:, None] * diagonal_variances(prior, g, support) / cell**2
        spread = np.zeros((d.n, d.n), dtype=np.float64)
        np.add.at(spread, (units.ravel(), degrees.ravel()), terms.ravel())
        spread = np.where(both, spread, 1.0)
    if np.any(both & (spread <= 0)):
        raise NetlueError(ErrorCode.SINGULAR_COVARIANCE, "a stratum has zero variance")
    return np.where(both, 1.0 / spread, 0.0)


def solve_sania_uncorrelated(
    g: Graph,
    d: Design,
    prior: PriorCov,
    config: SolverConfig = DEFAULT_SOLVER_CONFIG,
) -> SolveReport:
    """Stratified inverse-propensity weights for priors independent across units."""
    if not (
        isinstance(prior, UncorrelatedPrior)
        and prior.kind is PriorKind.SANIA_UNCORRELATED
    ):
        raise NetlueError(
            ErrorCode.PRECONDITION_FAILED, "needs a sania_uncorrelated prior"
        )
    existence = exists_sania(g, d)
    if not existence:
        raise _infeasible(existence.witness, existence.condition)

    support = d.support.astype(np.int64)
    degrees = treated_degrees(g, support)
    units = np.broadcast_to(np.arange(d.n), support.shape)
    scale = ht_scale(prior, g, d)
    total = scale.sum(axis=1)
    if np.any(total <= 0):
        raise _infeasible(int(np.argmin(total)), "sania")
    cell = propensity_table(d, g)[support, units, degrees]
    weights = (
        scale[units, degrees] / total[None, :] * (2 * support - 1) / (d.n * cell)
    )

    system = build_kkt_system(ModelKind.SANIA, g, d, prior, config.chunk_size)
    ws = WeightScheme.on(d, weights)
    multipliers = recover_multipliers(system, ws, config.dense_limit)
    return finalize(system, ws, multipliers, SolvePath.SANIA_UNCORRELATED, config)


def solve_nia_uncorrelated(
    g: Graph,
    d: Design,
    prior: PriorCov,
    config: SolverConfig = DEFAULT_SOLVER_CONFIG,
) -> SolveReport:
    """Inverse-propensity weights on units with no treated neighbors."""
    if not isinstance(prior, UncorrelatedPrior):
        raise NetlueError(
            ErrorCode.PRECONDITION_FAILED, "needs a prior uncorrelated across units"
        )
    existence = exists_nia(g, d)
    if not existence:
        raise _infeasible(existence.witness, existence.condition)

    support = d.support.astype(np.int64)
    degrees = treated_degrees(g, support)
    isolated = degrees == 0
    propensity = propensity_table(d, g)[:, :, 0]
    units = np.broadcast_to(np.arange(d.n), support.shape)
    cell = propensity[support, units]
    if np.any(isolated & (cell <= 0)):
        raise NetlueError(ErrorCode.ZERO_PROPENSITY, "a zero-degree cell has no mass")
    safe = np.where(isolated, cell, 1.0)
    weights = np.where(isolated, (2 * support - 1) / (d.n * safe), 0.0)

    system = build_kkt_system(ModelKind.NIA, g, d, prior, config.chunk_size)
    ws = WeightScheme.on(d, weights)
    multipliers = recover_multipliers(system, ws, config.dense_limit)
    return finalize(system, ws, multipliers, SolvePath.NIA_UNCORRELATED, config)


def solve_sanasia(
    g: Graph,
    d: Design,
    prior: PriorCov,
    config: SolverConfig = DEFAULT_SOLVER_CONFIG,
) -> SolveReport:
    """Closed form under SANASIA with the diagonal working covariance.

    Stationarity gives w_i(z) = (A_i + B_i z_i + G_k d_i) / sigma_i(z) with one
    slope multiplier G_k per shared-neighbor component k. The per-unit
    constraints fix A_i and B_i as affine functions of G_k, and the component
    constraint then fixes G_k.
    """
    if not isinstance(prior, SanasiaPrior):
        raise NetlueError(ErrorCode.PRECONDITION_FAILED, "needs a sanasia prior")
    working = prior.surrogate()
    n = d.n
    z = d.support.astype(np.float64)
    degrees = treated_degrees(g, d.support).astype(np.float64)
    sigma = diagonal_variances(working, g, d.support)
    if np.any(sigma <= 0):
        raise NetlueError(ErrorCode.SINGULAR_COVARIANCE, "a working variance is zero")

    mass = d.pmf[:, None] / sigma
    total = mass.sum(axis=0)
    treated = (mass * z).sum(axis=0)
    control = total - treated
    if np.any(treated <= 0):
        raise _infeasible(int(np.argmin(treated)), "sanasia treated arm")
    if np.any(control <= 0):
        raise _infeasible(int(np.argmin(control)), "sanasia control arm")
    exposure = (mass * degrees).sum(axis=0)
    treated_exposure = (mass * z * degrees).sum(axis=0)
    curvature = (mass * degrees**2).sum(axis=0)

    base_a = -1.0 / (n * control)
    slope_a = -(exposure - treated_exposure) / control
    base_b = 1.0 / (n * treated) - base_a
    slope_b = -slope_a - treated_exposure / treated

    labels = component_labels(shared_neighbor_graph(g))
    count = int(labels.max()) + 1
    numer = np.bincount(
        labels, weights=base_a * exposure + base_b * treated_exposure, minlength=count
    )
    denom = np.bincount(
        labels,
        weights=slope_a * exposure + slope_b * treated_exposure + curvature,
        minlength=count,
    )
    gamma = np.divide(-numer, denom, out=np.zeros(count), where=denom != 0)
    unit_gamma = gamma[labels]
    intercept = base_a + unit_gamma * slope_a
    treatment = base_b + unit_gamma * slope_b
    weights = (intercept + treatment * z + unit_gamma * degrees) / sigma

    system = build_kkt_system(ModelKind.SANASIA, g, d, working, config.chunk_size)
    multipliers = np.empty(system.multiplier_count, dtype=np.float64)
    for row, label in enumerate(system.constraints.labels):
        if label.family is ConstraintFamily.TREATED:
            multipliers[row] = -treatment[label.unit]
        elif label.family is ConstraintFamily.BASELINE:
            multipliers[row] = -intercept[label.unit]
        else:
            multipliers[row] = -gamma[label.key]
    return finalize(
        system, WeightScheme.on(d, weights), multipliers, SolvePath.SANASIA_CLOSED, config
    )
