"""Baseline estimators: naive, Horvitz-Thompson and stratified naive."""

from __future__ import annotations

import logging
from typing import Literal

import numpy as np

from netlue.core.errors import ErrorCode, NetlueError
from netlue.designs.design import Design, bitstring
from netlue.estimators.weights import WeightScheme
from netlue.graphs.graph import Graph, treated_degrees

LOGGER = logging.getLogger(__name__)


def naive_weights(d: Design) -> WeightScheme:
    """Difference of arm means; each allocation must treat some and not all units."""
    support = d.support.astype(np.float64)
    treated = support.sum(axis=1)
    control = d.n - treated
    if np.any(treated == 0) or np.any(control == 0):
        raise NetlueError(
            ErrorCode.PRECONDITION_FAILED,
            "naive estimator needs both arms in every allocation",
        )
    weights = support / treated[:, None] - (1.0 - support) / control[:, None]
    return WeightScheme.on(d, weights)


def ht_weights(d: Design) -> WeightScheme:
    """Inverse marginal propensity weights (2 z_i - 1) / (n P(z_i))."""
    support = d.support.astype(np.int64)
    p_treated = d.pmf @ support
    propensity = np.where(support == 1, p_treated[None, :], 1.0 - p_treated[None, :])
    if np.any(propensity <= 0):
        raise NetlueError(ErrorCode.ZERO_PROPENSITY, "a marginal propensity is zero")
    weights = (2 * support - 1) / (d.n * propensity)
    return WeightScheme.on(d, weights)


def _stratum_weights(z: np.ndarray, degrees: np.ndarray) -> np.ndarray | None:
    """Stratum contrasts weighted by C_d = (1/n_0d + 1/n_1d)^-1.

    Returns None when no stratum is balanced.
    """
    weights = np.zeros(z.size, dtype=np.float64)
    total = 0.0
    for deg in np.unique(degrees):
        members = degrees == deg
        treated = members & (z == 1)
        control = members & (z == 0)
        n_treated, n_control = int(treated.sum()), int(control.sum())
        if n_treated == 0 or n_control == 0:
            continue
        harmonic = 1.0 / (1.0 / n_treated + 1.0 / n_control)
        total += harmonic
        weights[treated] = harmonic / n_treated
        weights[control] = -harmonic / n_control
    if total == 0.0:
        return None
    return weights / total


def stratified_naive_weights(
    g: Graph, d: Design, fallback: Literal["raise", "naive"] = "raise"
) -> WeightScheme:
    """Naive contrasts within treated-degree strata.

    Strata lacking an arm get zero weight. With fallback="naive", allocations
    without any balanced stratum use naive weights instead of raising.
    """
    support = d.support.astype(np.int64)
    degrees = treated_degrees(g, support)
    rows = []
    fallbacks = 0
    for z, deg in zip(support, degrees):
        weights = _stratum_weights(z, deg)
        if weights is None:
            if fallback != "naive" or z.sum() in (0, d.n):
                raise NetlueError(
                    ErrorCode.PRECONDITION_FAILED,
                    f"allocation {bitstring(z)} has no stratum with both arms",
                )
            fallbacks += 1
            weights = z / z.sum() - (1 - z) / (d.n - z.sum())
        rows.append(weights)
    if fallbacks:
        LOGGER.debug("Stratified naive fell back to naive on %s allocations", fallbacks)
    return WeightScheme.on(d, np.vstack(rows))
