"""Directed interference graphs and derived structures."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

from netlue.core.errors import ErrorCode, NetlueError


@dataclass(frozen=True, eq=False)
class Graph:
    """Binary adjacency over n units; adj[i, j] = 1 means an edge i -> j."""

    adj: np.ndarray

    def __post_init__(self) -> None:
        adj = np.asarray(self.adj)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] < 1:
            raise NetlueError(
                ErrorCode.INVALID_GRAPH, f"adjacency must be square, got {adj.shape}"
            )
        if not np.isin(adj, (0, 1)).all():
            raise NetlueError(ErrorCode.INVALID_GRAPH, "adjacency must be binary")
        if np.any(np.diag(adj)):
            raise NetlueError(ErrorCode.INVALID_GRAPH, "self loops are not allowed")
        frozen = adj.astype(np.uint8, copy=True)
        frozen.setflags(write=False)
        object.__setattr__(self, "adj", frozen)

    @property
    def n(self) -> int:
        return int(self.adj.shape[0])

    @property
    def edge_count(self) -> int:
        return int(self.adj.sum())

    def in_degrees(self) -> np.ndarray:
        return self.adj.sum(axis=0).astype(np.int64)

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.n))
        sources, targets = np.nonzero(self.adj)
        graph.add_edges_from(zip(sources.tolist(), targets.tolist()))
        return graph

    @staticmethod
    def from_edges(n: int, edges: list[tuple[int, int]], symmetrize: bool = False) -> "Graph":
        """Build a graph from 0-indexed directed edges."""
        adj = np.zeros((n, n), dtype=np.uint8)
        for source, target in edges:
            if not (0 <= source < n and 0 <= target < n):
                raise NetlueError(
                    ErrorCode.INVALID_GRAPH, f"edge ({source}, {target}) out of range"
                )
            adj[source, target] = 1
            if symmetrize:
                adj[target, source] = 1
        return Graph(adj)


@dataclass(frozen=True)
class Coloring:
    """Partition of the units into independent sets."""

    classes: tuple[frozenset[int], ...]

    @property
    def n(self) -> int:
        return sum(len(members) for members in self.classes)

    def validate(self, g: Graph) -> None:
        """Raise if the classes do not form a proper coloring of g."""
        seen: set[int] = set()
        for members in self.classes:
            if seen & members:
                raise NetlueError(ErrorCode.INVALID_GRAPH, "coloring classes overlap")
            seen |= members
        if seen != set(range(g.n)):
            raise NetlueError(
                ErrorCode.INVALID_GRAPH, "coloring classes do not cover all units"
            )
        for members in self.classes:
            idx = sorted(members)
            if g.adj[np.ix_(idx, idx)].any():
                raise NetlueError(
                    ErrorCode.INVALID_GRAPH, "coloring class contains an edge"
                )


def _check_unit(g: Graph, i: int) -> None:
    if not 0 <= i < g.n:
        raise NetlueError(ErrorCode.INVALID_GRAPH, f"unit {i} out of range [0, {g.n})")


def neighborhood(g: Graph, i: int) -> frozenset[int]:
    """Units with an edge directed towards unit i."""
    _check_unit(g, i)
    return frozenset(int(j) for j in np.flatnonzero(g.adj[:, i]))


def sorted_neighbors(g: Graph, i: int) -> np.ndarray:
    _check_unit(g, i)
    return np.flatnonzero(g.adj[:, i])


def _as_allocation(g: Graph, z: np.ndarray | list[int] | tuple[int, ...]) -> np.ndarray:
    arr = np.asarray(z)
    if arr.shape != (g.n,):
        raise NetlueError(
            ErrorCode.INVALID_ALLOCATION,
            f"allocation length {arr.shape} does not match n={g.n}",
        )
    return arr.astype(np.int64)


def treated_degree(g: Graph, z: np.ndarray | list[int] | tuple[int, ...], i: int) -> int:
    """Number of treated in-neighbors of unit i under allocation z."""
    _check_unit(g, i)
    arr = _as_allocation(g, z)
    return int(arr @ g.adj[:, i].astype(np.int64))


def treated_degrees(g: Graph, allocations: np.ndarray) -> np.ndarray:
    """Treated degrees for every row of an allocation matrix (m x n)."""
    rows = np.atleast_2d(np.asarray(allocations))
    if rows.shape[1] != g.n:
        raise NetlueError(
            ErrorCode.INVALID_ALLOCATION,
            f"allocations have {rows.shape[1]} columns, expected {g.n}",
        )
    return rows.astype(np.int64) @ g.adj.astype(np.int64)


def shared_neighbor_graph(g: Graph) -> Graph:
    """Undirected graph joining units that share an in-neighbor."""
    counts = g.adj.T.astype(np.int64) @ g.adj.astype(np.int64)
    shared = (counts > 0).astype(np.uint8)
    np.fill_diagonal(shared, 0)
    return Graph(shared)


def connected_components(g: Graph) -> list[frozenset[int]]:
    """Weakly connected components ordered by their smallest unit."""
    components = nx.weakly_connected_components(g.to_networkx())
    return sorted((frozenset(c) for c in components), key=min)


def component_labels(g: Graph) -> np.ndarray:
    labels = np.empty(g.n, dtype=np.int64)
    for label, members in enumerate(connected_components(g)):
        labels[sorted(members)] = label
    return labels


def is_undirected(g: Graph) -> bool:
    return bool(np.array_equal(g.adj, g.adj.T))


def greedy_coloring(g: Graph) -> Coloring:
    """Smallest-available-color coloring in natural vertex order."""
    undirected = np.maximum(g.adj, g.adj.T)
    colors = np.full(g.n, -1, dtype=np.int64)
    for v in range(g.n):
        taken = {int(colors[u]) for u in np.flatnonzero(undirected[v]) if colors[u] >= 0}
        color = 0
        while color in taken:
            color += 1
        colors[v] = color
    classes = tuple(
        frozenset(int(v) for v in np.flatnonzero(colors == c))
        for c in range(int(colors.max()) + 1)
    )
    return Coloring(classes)
