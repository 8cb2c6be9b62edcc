from __future__ import annotations

import logging

from netlue.core.config import DEFAULT_SOLVER_CONFIG, SolverConfig
from netlue.designs.design import Design
from netlue.graphs.graph import Graph
from netlue.models.kinds import ModelKind
from netlue.priors.prior import PriorCov, PriorKind, SanasiaPrior, UncorrelatedPrior
from netlue.solver.closed_forms import (
    solve_nia_uncorrelated,
    solve_sania_uncorrelated,
    solve_sanasia,
)
from netlue.solver.general import is_nonsingular, solve_general, solve_nonsingular
from netlue.solver.report import SolveReport

LOGGER = logging.getLogger(__name__)


def solve_auto(
    kind: ModelKind,
    g: Graph,
    d: Design,
    prior: PriorCov,
    config: SolverConfig = DEFAULT_SOLVER_CONFIG,
) -> SolveReport:
    """Pick a closed form when the prior and kind admit one, else a KKT solver."""
    kind = ModelKind(kind)
    if isinstance(prior, UncorrelatedPrior):
        if kind is ModelKind.SANIA and prior.kind is PriorKind.SANIA_UNCORRELATED:
            return solve_sania_uncorrelated(g, d, prior, config)
        if kind is ModelKind.NIA:
            return solve_nia_uncorrelated(g, d, prior, config)
    if kind is ModelKind.SANASIA and isinstance(prior, SanasiaPrior):
        if prior.diagonal_surrogate:
            return solve_sanasia(g, d, prior, config)
    if is_nonsingular(prior, g, d, config):
        return solve_nonsingular(kind, g, d, prior, config)
    LOGGER.debug("Singular covariance, falling back to the general solver")
    return solve_general(kind, g, d, prior, config)
