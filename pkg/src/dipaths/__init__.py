"""Long dipaths in oriented graphs of given minimum outdegree.

Exact longest-dipath algorithms, the reductions and constructions that
surround the 2k-dipath question, and a pruned counterexample search.
"""

from .graph import (
    GraphError,
    OrientedGraph,
    build_graph,
    cut_vertices,
    load_graph,
    min_outdegree,
    parse_edgelist,
    save_graph,
    strong_components,
    to_edgelist,
    underlying_connectivity,
)
from .paths import PathResult, longest_dipath, longest_dipath_from, longest_dipath_through

__version__ = "0.1.0"

__all__ = [
    "GraphError", "OrientedGraph", "PathResult", "build_graph", "cut_vertices",
    "load_graph", "longest_dipath", "longest_dipath_from", "longest_dipath_through",
    "min_outdegree", "parse_edgelist", "save_graph", "strong_components",
    "to_edgelist", "underlying_connectivity",
]
