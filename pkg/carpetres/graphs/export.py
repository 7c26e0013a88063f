"""Statistics and file dumps for built graphs."""

from collections import Counter

import numpy as np

from carpetres.geometry.svg import emit_overlay_svg
from carpetres.graphs.builder import GraphApprox
from carpetres.models.records import GraphStats
from carpetres.network.conductance import ConductanceNetwork


def degrees(graph: GraphApprox) -> np.ndarray:
    return np.bincount(graph.edges.ravel(), minlength=graph.num_vertices)


def graph_stats(graph: GraphApprox) -> GraphStats:
    net = ConductanceNetwork(graph.num_vertices, graph.edges, graph.conductances)
    components, _ = net.components()
    histogram = Counter(int(d) for d in degrees(graph))
    return GraphStats(
        kind=graph.kind.value,
        N=graph.N,
        level=graph.level,
        num_vertices=graph.num_vertices,
        num_edges=graph.num_edges,
        degree_histogram=dict(sorted(histogram.items())),
        components=int(components),
        size_A=len(graph.boundary_A),
        size_B=len(graph.boundary_B),
    )


def graph_json(graph: GraphApprox) -> dict:
    """{kind, level, vertices: [{x, y, role}], edges: [[i, j]], A: [...], B: [...]}."""
    return {
        "kind": graph.kind.value,
        "N": graph.N,
        "level": graph.level,
        "vertices": [
            {"x": float(x), "y": float(y), "role": graph.role(i).value}
            for i, (x, y) in enumerate(graph.positions)
        ],
        "edges": graph.edges.tolist(),
        "A": graph.boundary_A.tolist(),
        "B": graph.boundary_B.tolist(),
    }


def emit_graph_svg(graph: GraphApprox) -> str:
    """The graph drawn over the cells of F_m, electrode vertices coloured."""
    return emit_overlay_svg(
        graph.params,
        graph.level,
        graph.positions,
        graph.edges,
        {"A": graph.boundary_A, "B": graph.boundary_B},
        title=f"{graph.kind.value}_{graph.level} for N={graph.N}",
    )
