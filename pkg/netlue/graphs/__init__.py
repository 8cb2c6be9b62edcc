from netlue.graphs.generators import GraphFamily, generate, parse_family, pref_attach
from netlue.graphs.graph import (
    Coloring,
    Graph,
    component_labels,
    connected_components,
    greedy_coloring,
    is_undirected,
    neighborhood,
    shared_neighbor_graph,
    sorted_neighbors,
    treated_degree,
    treated_degrees,
)

__all__ = [
    "Coloring",
    "Graph",
    "GraphFamily",
    "component_labels",
    "connected_components",
    "generate",
    "greedy_coloring",
    "is_undirected",
    "neighborhood",
    "parse_family",
    "pref_attach",
    "shared_neighbor_graph",
    "sorted_neighbors",
    "treated_degree",
    "treated_degrees",
]
