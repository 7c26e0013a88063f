"""
The approximating graphs G_m (cell centres and side midpoints) and D_m
(cell centres and corners).

Both are unions of copies of a small star graph, one per cell psi_w(F_0),
with coinciding vertices identified geometrically.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from carpetres.errors import GeometryToleranceError
from carpetres.geometry.carpet import CarpetParams
from carpetres.geometry.cells import (
    CLASS_A,
    CLASS_B,
    DEFAULT_MAX_CELLS,
    cell_maps,
    classify_points,
)
from carpetres.graphs.dedup import snap_dedup
from carpetres.network.conductance import ConductanceNetwork
from carpetres.utils.logger import log


class GraphKind(str, Enum):
    G = "G"
    D = "D"


class VertexRole(str, Enum):
    CENTER = "center"
    MIDPOINT = "midpoint"
    CORNER = "corner"


ROLE_CODES = {VertexRole.CENTER: 0, VertexRole.MIDPOINT: 1, VertexRole.CORNER: 2}
ROLE_NAMES = {code: role for role, code in ROLE_CODES.items()}


def base_points(params: CarpetParams, kind: GraphKind) -> tuple[np.ndarray, np.ndarray]:
    """
    Vertices of G_0 or D_0 in their fixed order, with role codes.

    G_0: centre, midpoints of L_0, L_N, L_{3N-1}.
    D_0: centre, C_0, C_1, C_N, C_{N+1}, C_{3N-1}, C_{3N}.
    """
    N = params.N
    center = np.zeros((1, 2))
    if kind is GraphKind.G:
        others = np.array([params.side_midpoint(j) for j in (0, N, 3 * N - 1)])
        role = ROLE_CODES[VertexRole.MIDPOINT]
    else:
        others = np.array([params.vertex(j) for j in (0, 1, N, N + 1, 3 * N - 1, 3 * N)])
        role = ROLE_CODES[VertexRole.CORNER]
    roles = np.array([ROLE_CODES[VertexRole.CENTER]] + [role] * len(others), dtype=np.int8)
    return np.vstack([center, others]), roles


@dataclass(frozen=True, eq=False)
class GraphApprox:
    """
    A built G_m or D_m.

    Attributes:
        positions: (V, 2) vertex coordinates
        roles: (V,) role codes (see ROLE_CODES)
        edges: (E, 2) sorted index pairs, i < j, rows in lexicographic order
        conductances: (E,) edge conductances (all 1)
        boundary_A, boundary_B: sorted vertex ids on A_m and B_m
        boundary_side: (V,) index k of the outer side L_k an electrode vertex lies on, else -1
        cell_vertices: (K, b) vertex ids of every cell's copy of the base graph, base order
    """

    kind: GraphKind
    level: int
    params: CarpetParams
    tol: float
    positions: np.ndarray
    roles: np.ndarray
    edges: np.ndarray
    conductances: np.ndarray
    boundary_A: np.ndarray
    boundary_B: np.ndarray
    boundary_side: np.ndarray
    cell_vertices: np.ndarray

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def num_vertices(self) -> int:
        return len(self.positions)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def centers(self) -> np.ndarray:
        return self.cell_vertices[:, 0]

    def role(self, vertex: int) -> VertexRole:
        return ROLE_NAMES[int(self.roles[vertex])]

    def vertices_on_side(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.boundary_side == self.params.index(k))

    def to_network(self) -> ConductanceNetwork:
        return ConductanceNetwork(self.num_vertices, self.edges, self.conductances)


def free_side_midpoint_count(params: CarpetParams, m: int) -> int:
    """
    Number of G_m midpoints that sit on a free (non-electrode) side of F_m.

    Of the 4N subcells of a cell, only j in {0, 1, N, N+1, 3N-1, 3N} put their
    L_0 / L_N / L_{3N-1} midpoints on sides of the parent; the other 4N - 6 put
    their L_0 midpoint on a free side. With f_0 = 0 and
    f_k = 4N f_{k-1} + (4N - 6) 2^(k-1), G_m has 4N f_{m-1} of them.
    """
    if m < 1:
        return 0
    n = params.num_cells_per_level
    f = 0
    for k in range(1, m):
        f = n * f + (n - 6) * 2 ** (k - 1)
    return n * f


def expected_vertex_count(params: CarpetParams, m: int) -> int:
    """
    Closed-form vertex count of G_m.

    Every midpoint is either shared by two cells, an electrode point (2N 2^m of
    them) or a dangling free-side point, so
    V = (4N)^m + (3 (4N)^m + 2N 2^m + free_side_midpoint_count) / 2.
    """
    if m == 0:
        return 4
    cells = params.num_cells_per_level ** m
    return cells + (3 * cells + 2 * params.N * 2 ** m + free_side_midpoint_count(params, m)) // 2


def expected_edge_count(params: CarpetParams, m: int, kind: GraphKind) -> int:
    per_cell = 3 if kind is GraphKind.G else 6
    return per_cell * params.num_cells_per_level ** m


def build_graph(params: CarpetParams, m: int, kind: GraphKind | str = GraphKind.G,
                tol: Optional[float] = None,
                max_cells: int = DEFAULT_MAX_CELLS) -> GraphApprox:
    """
    Build G_m = Psi_m(G_0) or D_m = Psi_m(D_0).

    Vertices coinciding within tol (default 1e-6 * r^m) are identified. For
    m >= 1 the electrode sets are tagged by which outer side a vertex lies on;
    G_0 and D_0 carry no electrodes.
    """
    kind = GraphKind(kind)
    if tol is None:
        tol = params.tolerance(m)

    base, base_roles = base_points(params, kind)
    matrices, offsets = cell_maps(params, m, max_cells)
    images = np.einsum("kij,bj->kbi", matrices, base) + offsets[:, None, :]
    ids, positions = snap_dedup(images.reshape(-1, 2), tol)

    num_cells, per_cell = images.shape[0], base.shape[0]
    cell_vertices = ids.reshape(num_cells, per_cell)

    roles = np.empty(len(positions), dtype=np.int8)
    roles[ids] = np.tile(base_roles, num_cells)

    centers = np.repeat(cell_vertices[:, 0], per_cell - 1)
    leaves = cell_vertices[:, 1:].ravel()
    edges = np.sort(np.column_stack([centers, leaves]), axis=1)
    edges = edges[np.lexsort((edges[:, 1], edges[:, 0]))]
    if len(np.unique(edges, axis=0)) != len(edges) or np.any(edges[:, 0] == edges[:, 1]):
        raise GeometryToleranceError(f"vertex identification merged edges of {kind.value}_{m}")

    boundary_side = np.full(len(positions), -1, dtype=np.int64)
    if m >= 1:
        codes, side = classify_points(params, positions, tol)
        on_boundary = codes != 0
        boundary_side[on_boundary] = side[on_boundary]
        boundary_A = np.flatnonzero(codes == CLASS_A)
        boundary_B = np.flatnonzero(codes == CLASS_B)
    else:
        boundary_A = boundary_B = np.zeros(0, dtype=np.int64)

    log.debug(
        f"Built {kind.value}_{m} (N={params.N}): {len(positions)} vertices, {len(edges)} edges, "
        f"|A|={len(boundary_A)}, |B|={len(boundary_B)}"
    )
    for array in (positions, roles, edges, boundary_A, boundary_B, boundary_side, cell_vertices):
        array.setflags(write=False)
    return GraphApprox(
        kind=kind,
        level=m,
        params=params,
        tol=tol,
        positions=positions,
        roles=roles,
        edges=edges,
        conductances=np.ones(len(edges)),
        boundary_A=boundary_A,
        boundary_B=boundary_B,
        boundary_side=boundary_side,
        cell_vertices=cell_vertices,
    )
