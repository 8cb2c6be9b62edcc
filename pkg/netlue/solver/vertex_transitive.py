"""Stratified naive weights certified optimal on symmetric graphs and designs."""

from __future__ import annotations

import logging
from math import comb
from typing import Iterator

import numpy as np

from netlue.core.config import DEFAULT_SOLVER_CONFIG, SolverConfig
from netlue.core.errors import ErrorCode, NetlueError
from netlue.designs.design import Design, bitstring
from netlue.estimators.baseline import stratified_naive_weights
from netlue.graphs.graph import Graph, connected_components, is_undirected, treated_degrees
from netlue.models.kinds import ModelKind
from netlue.priors.prior import PriorCov, sania_constant
from netlue.solver.general import finalize
from netlue.solver.kkt import build_kkt_system, recover_multipliers
from netlue.solver.report import SolvePath, SolveReport

LOGGER = logging.getLogger(__name__)

_PMF_RTOL = 1e-9


def _precondition(message: str) -> NetlueError:
    return NetlueError(ErrorCode.PRECONDITION_FAILED, message)


def _graph_shape(g: Graph) -> str:
    if g.edge_count == 0:
        return "empty"
    if np.array_equal(g.adj, 1 - np.eye(g.n, dtype=np.uint8)):
        return "complete"
    if (
        g.n >= 3
        and is_undirected(g)
        and np.all(g.in_degrees() == 2)
        and len(connected_components(g)) == 1
    ):
        return "ring"
    raise _precondition("graph is not empty, complete or a ring")


def cycle_order(g: Graph) -> np.ndarray:
    """Units in the order met walking around a ring from unit 0."""
    order = [0]
    previous = -1
    while len(order) < g.n:
        current = order[-1]
        step = next(int(v) for v in np.flatnonzero(g.adj[current]) if v != previous)
        previous = current
        order.append(step)
    return np.asarray(order, dtype=np.int64)


def _ring_automorphisms(g: Graph) -> Iterator[np.ndarray]:
    """Unit maps of all rotations and reflections along the cycle order."""
    order = cycle_order(g)
    n = g.n
    positions = np.arange(n)
    for shift in range(n):
        for sign in (1, -1):
            mapping = np.empty(n, dtype=np.int64)
            mapping[order] = order[(sign * positions + shift) % n]
            yield mapping


def _check_ring_symmetry(g: Graph, d: Design) -> None:
    index = {row.tobytes(): k for k, row in enumerate(d.support)}
    for mapping in _ring_automorphisms(g):
        moved = np.empty_like(d.support)
        moved[:, mapping] = d.support
        for k, row in enumerate(moved):
            image = index.get(row.tobytes())
            if image is None or not np.isclose(
                d.pmf[image], d.pmf[k], rtol=_PMF_RTOL, atol=0.0
            ):
                raise _precondition(
                    f"design is not ring symmetric at {bitstring(d.support[k])}"
                )


def _check_exchangeable(d: Design) -> None:
    weights = d.support.sum(axis=1)
    for weight in np.unique(weights):
        members = weights == weight
        if int(members.sum()) != comb(d.n, int(weight)):
            raise _precondition(f"design misses allocations with {weight} treated")
        masses = d.pmf[members]
        if not np.allclose(masses, masses[0], rtol=_PMF_RTOL, atol=0.0):
            raise _precondition(f"design is not exchangeable at {weight} treated")


def _check_balance(g: Graph, d: Design) -> None:
    support = d.support.astype(np.int64)
    degrees = treated_degrees(g, support)
    for z, deg in zip(support, degrees):
        if np.intersect1d(deg[z == 1], deg[z == 0]).size == 0:
            raise _precondition(
                f"allocation {bitstring(z)} shares no treated degree across arms"
            )


def solve_vertex_transitive(
    g: Graph,
    d: Design,
    prior: PriorCov | None = None,
    config: SolverConfig = DEFAULT_SOLVER_CONFIG,
) -> SolveReport:
    """Stratified naive weights, verified against a constant-prior KKT system.

    The default prior is the unit-constant SANIA prior without jitter.
    """
    shape = _graph_shape(g)
    if shape == "ring":
        _check_ring_symmetry(g, d)
    else:
        _check_exchangeable(d)
    _check_balance(g, d)
    LOGGER.debug("Certified %s graph with symmetric design", shape)

    certifying = prior if prior is not None else sania_constant(g.n, jitter=0.0)
    system = build_kkt_system(ModelKind.SANIA, g, d, certifying, config.chunk_size)
    ws = stratified_naive_weights(g, d)
    multipliers = recover_multipliers(system, ws, config.dense_limit)
    return finalize(system, ws, multipliers, SolvePath.VERTEX_TRANSITIVE, config)
