"""
Sector decomposition of the optimal potential on a symmetric mesh of F_n.

The sector T_j is the part of F_n inside the triangle (0, C_j, C_{j+1}). On
T_0, v is the signed potential u_n itself and w is u_n composed with theta,
so w carries the values u_n takes on T_1.
"""

import math
from dataclasses import dataclass

import numpy as np

from carpetres.errors import MeshConstructionError
from carpetres.fem.mesh import node_permutation
from carpetres.fem.solver import FemSolution, element_energies, normalize_pm1
from carpetres.geometry.carpet import AffineMap, theta_map

ANGLE_SLACK = 1e-9


@dataclass(frozen=True)
class SectorData:
    """
    Sector energies of u_n and the derived current energies.

    E_v, E_w: energies of v and w on T_0.
    orthogonality: the cross term a(v, w) over T_0.
    sector_energies: energy of u_n on each T_j (j-independent up to parity).
    """

    N: int
    R: float
    E_v: float
    E_w: float
    orthogonality: float
    theta2_residual: float
    conj_residual: float
    sector_energies: tuple[float, ...]

    @property
    def E_V(self) -> float:
        return self.R ** 2 * self.E_v

    @property
    def E_W(self) -> float:
        return self.R ** 2 * self.E_w

    @property
    def identity_residual(self) -> float:
        """|4/R - 2N (E_v + E_w)| relative to 4/R."""
        target = 4.0 / self.R
        return abs(target - 2 * self.N * (self.E_v + self.E_w)) / target

    @property
    def orthogonality_relative(self) -> float:
        scale = math.sqrt(self.E_v * self.E_w)
        return abs(self.orthogonality) / scale if scale > 0 else abs(self.orthogonality)


def triangle_sectors(mesh) -> np.ndarray:
    """
    Sector index of every triangle.

    Raises:
        MeshConstructionError: a triangle straddles a sector boundary ray.
    """
    params = mesh.params
    n = params.num_cells_per_level
    half = math.pi / n
    centroids = mesh.centroids()
    angle = np.arctan2(centroids[:, 1], centroids[:, 0])
    sectors = np.floor((angle + half) / params.alpha).astype(np.int64) % n

    points = mesh.nodes[mesh.triangles]
    radius = np.linalg.norm(points, axis=2)
    centre_angle = sectors * params.alpha
    offset = np.arctan2(points[:, :, 1], points[:, :, 0]) - centre_angle[:, None]
    offset = np.abs((offset + math.pi) % (2 * math.pi) - math.pi)
    straddling = (radius > mesh.tol) & (offset > half + ANGLE_SLACK)
    if np.any(straddling):
        bad = int(np.flatnonzero(straddling.any(axis=1))[0])
        raise MeshConstructionError(f"triangle {bad} straddles a sector boundary")
    return sectors


def sector_analysis(solution: FemSolution) -> SectorData:
    """Sector energies, orthogonality and symmetry residuals of the signed potential u_n."""
    mesh = solution.mesh
    params = mesh.params
    if params is None:
        raise MeshConstructionError("sector analysis needs a pre-carpet mesh")
    sectors = triangle_sectors(mesh)
    u = normalize_pm1(solution)
    local = solution.local

    perm_theta = node_permutation(mesh, theta_map(params, 1))
    perm_theta2 = node_permutation(mesh, theta_map(params, 2))
    perm_conj = node_permutation(mesh, AffineMap.conjugation())
    w_field = u[perm_theta]

    per_triangle = element_energies(local, mesh.triangles, u)
    sector_energies = tuple(
        math.fsum(per_triangle[sectors == j]) for j in range(params.num_cells_per_level)
    )
    in_t0 = sectors == 0
    tris0, local0 = mesh.triangles[in_t0], local[in_t0]
    E_v = math.fsum(element_energies(local0, tris0, u))
    E_w = math.fsum(element_energies(local0, tris0, w_field))
    cross = math.fsum(element_energies(local0, tris0, u, w_field))

    return SectorData(
        N=params.N,
        R=solution.R_est,
        E_v=E_v,
        E_w=E_w,
        orthogonality=cross,
        theta2_residual=float(np.abs(u[perm_theta2] + u).max()),
        conj_residual=float(np.abs(u[perm_conj] - u).max()),
        sector_energies=sector_energies,
    )
