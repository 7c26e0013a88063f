"""
Conforming P1 triangulations of the pre-carpets F_n.

Each level-n cell is fan-triangulated from its centre into 4N triangles and
red-refined k times. All cells carry the same reference triangulation, so
nodes on a shared cell side coincide and the mesh keeps every symmetry of F_n.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from carpetres.errors import LevelCapExceeded, MeshConstructionError
from carpetres.geometry.carpet import AffineMap, CarpetParams
from carpetres.geometry.cells import CLASS_A, CLASS_B, classify_points, phi_cell_offsets
from carpetres.graphs.dedup import snap_dedup
from carpetres.utils.logger import log

INTERIOR = 0
DIRICHLET_A = 1
DIRICHLET_B = 2
NEUMANN = 3

DEFAULT_MAX_TRIANGLES = 4_000_000


@dataclass(frozen=True, eq=False)
class Mesh:
    """
    Nodes, positively oriented triangles and node markers.

    ``params`` is None for meshes that are not pre-carpets (the unit square).
    """

    nodes: np.ndarray
    triangles: np.ndarray
    markers: np.ndarray
    level: int
    refine: int
    tol: float
    params: Optional[CarpetParams] = None

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    @property
    def nodes_A(self) -> np.ndarray:
        return np.flatnonzero(self.markers == DIRICHLET_A)

    @property
    def nodes_B(self) -> np.ndarray:
        return np.flatnonzero(self.markers == DIRICHLET_B)

    def areas(self) -> np.ndarray:
        p = self.nodes[self.triangles]
        d1, d2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def centroids(self) -> np.ndarray:
        return self.nodes[self.triangles].mean(axis=1)


def _edges(triangles: np.ndarray) -> np.ndarray:
    """All triangle edges as sorted pairs, three per triangle in order (01, 12, 20)."""
    edges = np.concatenate([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]])
    return np.sort(edges, axis=1)


def refine_uniform(nodes: np.ndarray, triangles: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split every triangle into four through its edge midpoints; orientation is kept."""
    t = len(triangles)
    unique, inverse = np.unique(_edges(triangles), axis=0, return_inverse=True)
    inverse = inverse.ravel()
    midpoints = 0.5 * (nodes[unique[:, 0]] + nodes[unique[:, 1]])
    mid = len(nodes) + inverse
    m01, m12, m20 = mid[:t], mid[t:2 * t], mid[2 * t:]
    a, b, c = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    children = np.concatenate([
        np.column_stack([a, m01, m20]),
        np.column_stack([m01, b, m12]),
        np.column_stack([m20, m12, c]),
        np.column_stack([m01, m12, m20]),
    ])
    return np.vstack([nodes, midpoints]), children


def reference_fan(params: CarpetParams) -> tuple[np.ndarray, np.ndarray]:
    """F_0 split into 4N triangles (0, C_j, C_{j+1})."""
    n = params.num_cells_per_level
    nodes = np.vstack([np.zeros((1, 2)), params.vertices])
    j = np.arange(n)
    triangles = np.column_stack([np.zeros(n, dtype=np.int64), j + 1, (j + 1) % n + 1])
    return nodes, triangles


def expected_triangle_count(params: CarpetParams, n: int, k: int) -> int:
    return params.num_cells_per_level * 4 ** k * params.num_cells_per_level ** n


def _boundary_nodes(triangles: np.ndarray) -> np.ndarray:
    edges, counts = np.unique(_edges(triangles), axis=0, return_counts=True)
    if np.any(counts > 2):
        raise MeshConstructionError(f"{int(np.sum(counts > 2))} edges are shared by more than two triangles")
    return np.unique(edges[counts == 1])


def _mark(nodes: np.ndarray, triangles: np.ndarray, dirichlet: np.ndarray) -> np.ndarray:
    markers = np.full(len(nodes), INTERIOR, dtype=np.int8)
    markers[_boundary_nodes(triangles)] = NEUMANN
    markers[dirichlet == CLASS_A] = DIRICHLET_A
    markers[dirichlet == CLASS_B] = DIRICHLET_B
    return markers


def build_mesh(params: CarpetParams, n: int, k: int, snap_tolerance: float = 1e-6,
               max_triangles: int = DEFAULT_MAX_TRIANGLES) -> Mesh:
    """
    Triangulate F_n: fan each level-n cell, red-refine k times, identify shared nodes.

    Nodes on A_n / B_n (including the junctions with the free boundary) are
    Dirichlet nodes; the remaining boundary nodes are Neumann nodes.
    """
    if n < 0 or k < 0:
        raise ValueError(f"level and refinement must be non-negative, got n={n}, k={k}")
    count = expected_triangle_count(params, n, k)
    if count > max_triangles:
        raise LevelCapExceeded(f"triangles for N={params.N}, n={n}, k={k}", count, max_triangles)

    ref_nodes, ref_tris = reference_fan(params)
    for _ in range(k):
        ref_nodes, ref_tris = refine_uniform(ref_nodes, ref_tris)

    offsets = phi_cell_offsets(params, n)
    scale = params.r ** n
    all_nodes = (scale * ref_nodes[None, :, :] + offsets[:, None, :]).reshape(-1, 2)
    shift = (np.arange(len(offsets)) * len(ref_nodes))[:, None, None]
    all_tris = (ref_tris[None, :, :] + shift).reshape(-1, 3)

    tol = params.tolerance(n, snap_tolerance)
    ids, nodes = snap_dedup(all_nodes, tol)
    triangles = ids[all_tris]

    codes, _ = classify_points(params, nodes, tol)
    markers = _mark(nodes, triangles, codes)
    mesh = Mesh(nodes=nodes, triangles=triangles, markers=markers, level=n, refine=k,
                tol=tol, params=params)
    if np.any(mesh.areas() <= 0):
        raise MeshConstructionError("mesh contains degenerate or inverted triangles")
    log.debug(f"Mesh N={params.N} n={n} k={k}: {mesh.num_nodes} nodes, {mesh.num_triangles} triangles")
    return mesh


def unit_square_mesh(k: int) -> Mesh:
    """[0,1]^2 with A the left edge (x = 0) and B the right edge (x = 1), refined k times."""
    nodes = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    triangles = np.array([[0, 1, 2], [0, 2, 3]])
    for _ in range(k):
        nodes, triangles = refine_uniform(nodes, triangles)
    tol = 1e-12
    codes = np.zeros(len(nodes), dtype=np.int8)
    codes[np.abs(nodes[:, 0]) <= tol] = CLASS_A
    codes[np.abs(nodes[:, 0] - 1.0) <= tol] = CLASS_B
    return Mesh(nodes=nodes, triangles=triangles, markers=_mark(nodes, triangles, codes),
                level=0, refine=k, tol=tol)


def node_permutation(mesh: Mesh, transform: AffineMap) -> np.ndarray:
    """
    perm[i] is the node at transform(nodes[i]).

    Raises:
        MeshConstructionError: the node set is not invariant under the transform.
    """
    dist, perm = cKDTree(mesh.nodes).query(transform(mesh.nodes))
    if dist.max() > 10 * mesh.tol or len(np.unique(perm)) != len(perm):
        raise MeshConstructionError("mesh node set is not invariant under the given symmetry")
    return perm
