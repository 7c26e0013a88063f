"""
P1 Galerkin solution of the mixed problem: u = 0 on A, u = 1 on B, free elsewhere.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from carpetres.errors import InvalidBoundaryError
from carpetres.fem.mesh import Mesh, build_mesh
from carpetres.geometry.carpet import CarpetParams
from carpetres.models.records import ConvergenceRow, ConvergenceTable
from carpetres.network.conductance import SolverOptions, solve_dirichlet_system
from carpetres.utils.logger import log


def element_matrices(mesh: Mesh) -> np.ndarray:
    """
    Element stiffness matrices, shape (T, 3, 3).

    K_ij = e_i . e_j / (4 |T|) with e_i the edge opposite vertex i.
    """
    p = mesh.nodes[mesh.triangles]
    e = np.stack([p[:, 2] - p[:, 1], p[:, 0] - p[:, 2], p[:, 1] - p[:, 0]], axis=1)
    areas = mesh.areas()
    return np.einsum("tid,tjd->tij", e, e) / (4.0 * areas)[:, None, None]


def stiffness_matrix(mesh: Mesh, local: Optional[np.ndarray] = None) -> sp.csr_matrix:
    local = element_matrices(mesh) if local is None else local
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    n = mesh.num_nodes
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()


def element_energies(local: np.ndarray, triangles: np.ndarray, values: np.ndarray,
                     other: Optional[np.ndarray] = None) -> np.ndarray:
    """Per-triangle bilinear form a_T(u, v) = u_T^t K_T v_T (v defaults to u)."""
    u = values[triangles]
    v = u if other is None else other[triangles]
    return np.einsum("ti,tij,tj->t", u, local, v)


@dataclass(frozen=True, eq=False)
class FemSolution:
    mesh: Mesh
    values: np.ndarray
    energy: float
    R_est: float
    local: np.ndarray
    solver: str = "direct"


def solve_mixed_bvp(mesh: Mesh, options: Optional[SolverOptions] = None) -> FemSolution:
    """
    Minimise the Dirichlet energy over continuous piecewise-linear functions.

    Returns the energy and R_est = 1 / energy, a lower bound for the
    continuum resistance.
    """
    A, B = mesh.nodes_A, mesh.nodes_B
    if len(A) == 0 or len(B) == 0:
        raise InvalidBoundaryError("mesh has no A or no B Dirichlet nodes")
    local = element_matrices(mesh)
    K = stiffness_matrix(mesh, local)
    fixed = np.concatenate([A, B])
    values = np.concatenate([np.zeros(len(A)), np.ones(len(B))])
    u, method = solve_dirichlet_system(K, fixed, values, options)
    energy = math.fsum(element_energies(local, mesh.triangles, u))
    R_est = 1.0 / energy if energy > 0 else math.inf
    log.debug(f"FEM solve: {mesh.num_nodes} nodes, energy={energy!r}, R_est={R_est!r}")
    return FemSolution(mesh=mesh, values=u, energy=energy, R_est=R_est, local=local, solver=method)


def normalize_pm1(solution: FemSolution) -> np.ndarray:
    """u_n = 2u - 1: boundary values -1 on A and +1 on B, energy 4 / R."""
    return 2.0 * solution.values - 1.0


def aitken(values: list[float]) -> Optional[float]:
    """Aitken delta-squared extrapolation of the last three values; None if undefined."""
    if len(values) < 3:
        return None
    x0, x1, x2 = values[-3:]
    denominator = (x2 - x1) - (x1 - x0)
    if denominator == 0 or not math.isfinite(denominator):
        return None
    return x2 - (x2 - x1) ** 2 / denominator


def convergence_table(params: CarpetParams, n: int, k_max: int,
                      options: Optional[SolverOptions] = None,
                      snap_tolerance: float = 1e-6,
                      max_triangles: Optional[int] = None) -> ConvergenceTable:
    """R_est of F_n for refinements k = 0..k_max, with increments and an Aitken estimate."""
    rows: list[ConvergenceRow] = []
    for k in range(k_max + 1):
        kwargs = {} if max_triangles is None else {"max_triangles": max_triangles}
        mesh = build_mesh(params, n, k, snap_tolerance, **kwargs)
        sol = solve_mixed_bvp(mesh, options)
        delta = sol.R_est - rows[-1].R_est if rows else None
        rows.append(ConvergenceRow(k=k, nodes=mesh.num_nodes, energy=sol.energy,
                                   R_est=sol.R_est, delta=delta))
    return ConvergenceTable(N=params.N, n=n, rows=rows,
                            aitken_estimate=aitken([row.R_est for row in rows]))
