from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netlue.core.errors import ErrorCode, NetlueError
from netlue.graphs.graph import (
    Coloring,
    Graph,
    component_labels,
    connected_components,
    greedy_coloring,
    is_undirected,
    neighborhood,
    shared_neighbor_graph,
    treated_degree,
    treated_degrees,
)
from tests.instances import random_graph, ring, tail_at_two


def _two_triangles() -> Graph:
    edges = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]
    return Graph.from_edges(6, edges, symmetrize=True)


def test_graph_rejects_self_loops_and_non_binary_entries() -> None:
    with pytest.raises(NetlueError) as loop:
        Graph(np.eye(3, dtype=np.uint8))
    with pytest.raises(NetlueError) as weighted:
        Graph(np.array([[0, 2], [0, 0]]))

    assert loop.value.error_code is ErrorCode.INVALID_GRAPH
    assert weighted.value.error_code is ErrorCode.INVALID_GRAPH


def test_neighborhood_of_tail_unit_is_its_anchor() -> None:
    g = tail_at_two()

    assert neighborhood(g, 3) == frozenset({2})
    assert neighborhood(g, 2) == frozenset({0, 1, 3})


def test_neighborhood_follows_edge_direction() -> None:
    g = Graph.from_edges(3, [(0, 1), (2, 1)])

    assert neighborhood(g, 1) == frozenset({0, 2})
    assert neighborhood(g, 0) == frozenset()


def test_treated_degree_counts_treated_neighbors() -> None:
    assert treated_degree(tail_at_two(), (1, 1, 0, 0), 2) == 2
    assert treated_degree(ring(4), (1, 0, 1, 0), 1) == 2
    assert treated_degree(ring(4), (1, 0, 1, 0), 0) == 0


def test_treated_degree_rejects_short_allocation() -> None:
    with pytest.raises(NetlueError) as exc:
        treated_degree(ring(4), (1, 0, 1), 0)

    assert exc.value.error_code is ErrorCode.INVALID_ALLOCATION


def test_shared_neighbor_graph_of_ring_splits_parity_classes() -> None:
    h = shared_neighbor_graph(ring(4))

    assert connected_components(h) == [frozenset({0, 2}), frozenset({1, 3})]
    assert component_labels(h).tolist() == [0, 1, 0, 1]


def test_shared_neighbor_graph_matches_matrix_product() -> None:
    g = tail_at_two()
    product = g.adj.T.astype(int) @ g.adj.astype(int)
    expected = (product > 0).astype(int)
    np.fill_diagonal(expected, 0)

    assert np.array_equal(shared_neighbor_graph(g).adj, expected)


def test_greedy_coloring_of_two_triangles_uses_three_classes() -> None:
    g = _two_triangles()
    coloring = greedy_coloring(g)

    coloring.validate(g)
    assert len(coloring.classes) == 3
    assert coloring.n == 6


def test_coloring_validate_rejects_edge_inside_class() -> None:
    g = ring(4)
    bad = Coloring((frozenset({0, 1}), frozenset({2, 3})))

    with pytest.raises(NetlueError) as exc:
        bad.validate(g)

    assert exc.value.error_code is ErrorCode.INVALID_GRAPH


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 7))
def test_treated_degrees_match_per_unit_counts(seed: int, n: int) -> None:
    g = random_graph(n, seed)
    rng = np.random.default_rng(seed)
    allocations = rng.integers(0, 2, size=(5, n))
    degrees = treated_degrees(g, allocations)

    for row, z in enumerate(allocations):
        for i in range(n):
            assert degrees[row, i] == treated_degree(g, z, i)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 7))
def test_shared_neighbor_graph_is_undirected(seed: int, n: int) -> None:
    h = shared_neighbor_graph(random_graph(n, seed))

    assert is_undirected(h)
    assert not np.diag(h.adj).any()
