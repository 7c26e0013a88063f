"""
Graph approximations G_m and D_m of the pre-carpets.
"""

from carpetres.graphs.builder import (
    GraphApprox,
    GraphKind,
    VertexRole,
    build_graph,
    expected_edge_count,
    expected_vertex_count,
    free_side_midpoint_count,
)
from carpetres.graphs.dedup import snap_dedup
from carpetres.graphs.export import emit_graph_svg, graph_json, graph_stats
from carpetres.graphs.symmetry import Symmetry, SymmetryPermutation, symmetry_permutation

__all__ = [
    "GraphApprox",
    "GraphKind",
    "VertexRole",
    "build_graph",
    "expected_edge_count",
    "expected_vertex_count",
    "free_side_midpoint_count",
    "snap_dedup",
    "emit_graph_svg",
    "graph_json",
    "graph_stats",
    "Symmetry",
    "SymmetryPermutation",
    "symmetry_permutation",
]
