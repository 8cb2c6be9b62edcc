"""Seeded generators for the graph families used in the simulations."""

from __future__ import annotations

import re
from netlue._compat import StrEnum

import networkx as nx
import numpy as np

from netlue.core.errors import ErrorCode, NetlueError
from netlue.graphs.graph import Graph

_FAMILY_PATTERN = re.compile(r"^\s*([a-z_0-9]+)\s*(?:\(\s*([^)]*?)\s*\))?\s*$")


class GraphFamily(StrEnum):
    EMPTY = "empty"
    COMPLETE = "complete"
    RING = "ring"
    TRIANGLE_TAIL_V3 = "triangle_tail_v3"
    TRIANGLE_TAIL_V1 = "triangle_tail_v1"
    ERDOS_RENYI = "erdos_renyi"
    PREF_ATTACH = "pref_attach"


def parse_family(spec: str) -> tuple[GraphFamily, float | None]:
    """Parse 'erdos_renyi(0.5)' style family strings."""
    match = _FAMILY_PATTERN.match(spec)
    if not match:
        raise NetlueError(ErrorCode.INVALID_CONFIG, f"bad graph family: {spec!r}")
    name, raw_param = match.groups()
    try:
        family = GraphFamily(name)
    except ValueError as exc:
        raise NetlueError(
            ErrorCode.INVALID_CONFIG, f"unknown graph family: {name!r}"
        ) from exc
    param = float(raw_param) if raw_param else None
    if family in (GraphFamily.ERDOS_RENYI, GraphFamily.PREF_ATTACH) and param is None:
        raise NetlueError(ErrorCode.INVALID_CONFIG, f"{name} requires a parameter")
    return family, param


def _from_networkx(graph: nx.Graph, n: int) -> Graph:
    adj = nx.to_numpy_array(graph, nodelist=range(n), dtype=np.uint8)
    return Graph(adj)


def _triangle_with_tail(n: int, anchor: int) -> Graph:
    if n != 4:
        raise NetlueError(ErrorCode.INVALID_CONFIG, "triangle with tail has n=4")
    edges = [(0, 1), (0, 2), (1, 2), (anchor, 3)]
    return Graph.from_edges(4, edges, symmetrize=True)


def pref_attach(n: int, rho: float, seed: int) -> Graph:
    """Grow a tree one node at a time with attachment weight degree**rho.

    Starts from the single edge 0-1 and relabels all vertices uniformly at
    random once growth is complete.
    """
    if rho < 0:
        raise NetlueError(ErrorCode.INVALID_CONFIG, f"rho must be >= 0, got {rho}")
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, n), dtype=np.uint8)
    if n >= 2:
        adj[0, 1] = adj[1, 0] = 1
    degree = adj.sum(axis=0).astype(np.float64)
    for new in range(2, n):
        current = degree[:new]
        weights = np.power(current, rho, where=current > 0, out=np.zeros(new))
        positive = weights[weights > 0]
        floor = positive.min() if positive.size else 1.0
        weights[current == 0] = floor
        target = int(rng.choice(new, p=weights / weights.sum()))
        adj[new, target] = adj[target, new] = 1
        degree[new] += 1
        degree[target] += 1
    perm = rng.permutation(n)
    relabeled = np.zeros_like(adj)
    relabeled[np.ix_(perm, perm)] = adj
    return Graph(relabeled)


def generate(
    family: GraphFamily | str, n: int, seed: int = 0, param: float | None = None
) -> Graph:
    """Generate a graph of the given family; deterministic in (family, n, seed)."""
    if isinstance(family, str) and not isinstance(family, GraphFamily):
        parsed, parsed_param = parse_family(family)
        family, param = parsed, parsed_param if parsed_param is not None else param
    if n < 1:
        raise NetlueError(ErrorCode.INVALID_CONFIG, f"n must be >= 1, got {n}")

    if family == GraphFamily.EMPTY:
        return Graph(np.zeros((n, n), dtype=np.uint8))
    if family == GraphFamily.COMPLETE:
        return _from_networkx(nx.complete_graph(n), n)
    if family == GraphFamily.RING:
        if n < 3:
            raise NetlueError(ErrorCode.INVALID_CONFIG, "ring requires n >= 3")
        return _from_networkx(nx.cycle_graph(n), n)
    if family == GraphFamily.TRIANGLE_TAIL_V3:
        return _triangle_with_tail(n, anchor=2)
    if family == GraphFamily.TRIANGLE_TAIL_V1:
        return _triangle_with_tail(n, anchor=0)
    if family == GraphFamily.ERDOS_RENYI:
        p = float(param if param is not None else -1.0)
        if not 0.0 <= p <= 1.0:
            raise NetlueError(ErrorCode.INVALID_CONFIG, f"p must be in [0, 1], got {p}")
        return _from_networkx(nx.gnp_random_graph(n, p, seed=seed), n)
    if family == GraphFamily.PREF_ATTACH:
        return pref_attach(n, float(param if param is not None else -1.0), seed)
    raise NetlueError(ErrorCode.INVALID_CONFIG, f"unsupported family {family}")
