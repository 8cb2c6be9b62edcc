"""The six estimators compared in the simulation studies."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from netlue._compat import StrEnum
from typing import Callable, Iterable

from netlue.core.config import DEFAULT_SOLVER_CONFIG, SolverConfig
from netlue.core.errors import NetlueError
from netlue.designs.design import Design
from netlue.estimators.baseline import (
    ht_weights,
    naive_weights,
    stratified_naive_weights,
)
from netlue.estimators.weights import WeightScheme
from netlue.graphs.graph import Graph
from netlue.models.kinds import ModelKind
from netlue.priors.prior import sania_constant, sania_uncorrelated, sanasia_independent
from netlue.solver.closed_forms import solve_sania_uncorrelated, solve_sanasia
from netlue.solver.general import solve_nonsingular

LOGGER = logging.getLogger(__name__)

EQUAL_JITTER = 1e-4


class EstimatorName(StrEnum):
    NAIVE = "naive"
    HORVITZ_THOMPSON = "horvitz_thompson"
    STRATIFIED_NAIVE = "stratified_naive"
    INDEPENDENT = "independent"
    EQUAL = "equal"
    SANASIA = "sanasia"


@dataclass(frozen=True)
class EstimatorSuite:
    schemes: dict[EstimatorName, WeightScheme] = field(default_factory=dict)
    failures: dict[EstimatorName, str] = field(default_factory=dict)


def _independent(g: Graph, d: Design, config: SolverConfig) -> WeightScheme:
    return solve_sania_uncorrelated(g, d, sania_uncorrelated(g.n), config).weights


def _equal(g: Graph, d: Design, config: SolverConfig) -> WeightScheme:
    prior = sania_constant(g.n, jitter=EQUAL_JITTER)
    return solve_nonsingular(ModelKind.SANIA, g, d, prior, config).weights


def _sanasia(g: Graph, d: Design, config: SolverConfig) -> WeightScheme:
    prior = sanasia_independent(g.n, diagonal_surrogate=True)
    return solve_sanasia(g, d, prior, config).weights


_BUILDERS: dict[EstimatorName, Callable[[Graph, Design, SolverConfig], WeightScheme]] = {
    EstimatorName.NAIVE: lambda g, d, _: naive_weights(d),
    EstimatorName.HORVITZ_THOMPSON: lambda g, d, _: ht_weights(d),
    EstimatorName.STRATIFIED_NAIVE: lambda g, d, _: stratified_naive_weights(
        g, d, fallback="naive"
    ),
    EstimatorName.INDEPENDENT: _independent,
    EstimatorName.EQUAL: _equal,
    EstimatorName.SANASIA: _sanasia,
}


def six_estimators(
    g: Graph,
    d: Design,
    config: SolverConfig = DEFAULT_SOLVER_CONFIG,
    include: Iterable[EstimatorName | str] | None = None,
) -> EstimatorSuite:
    """Build each requested estimator; failures are collected, not raised."""
    names = [EstimatorName(name) for name in include] if include else list(EstimatorName)
    suite = EstimatorSuite()
    for name in names:
        try:
            suite.schemes[name] = _BUILDERS[name](g, d, config)
        except NetlueError as exc:
            suite.failures[name] = f"{exc.error_code}: {exc.message}"
            LOGGER.debug("Estimator failed: %s", exc.message, extra={"estimator": str(name)})
    return suite
