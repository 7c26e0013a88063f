"""
Conductance networks and the Dirichlet-constrained Laplacian solve.

The same solve backs both the graph resistances and the finite element
stiffness systems.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import cg, spsolve

from carpetres.errors import SolverError
from carpetres.utils.logger import log


@dataclass(frozen=True)
class SolverOptions:
    """Linear solver policy: direct factorisation up to a size, then Jacobi-preconditioned CG."""

    rtol: float = 1e-12
    direct_max_unknowns: int = 200_000
    cg_iter_factor: int = 50

    @classmethod
    def from_config(cls) -> "SolverOptions":
        from carpetres.config import get_config

        solver = get_config().solver
        return cls(solver.rtol, solver.direct_max_unknowns, solver.cg_iter_factor)


class ConductanceNetwork:
    """
    An undirected weighted graph on vertices 0..n-1.

    Edges are stored once, as sorted pairs (i < j) in lexicographic order, so
    every reduction over edges runs in a fixed order.
    """

    def __init__(self, num_vertices: int, edges, conductances=None):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        g = np.ones(len(edges)) if conductances is None else np.asarray(conductances, dtype=float)
        if len(g) != len(edges):
            raise ValueError("one conductance per edge is required")
        if np.any(g <= 0):
            raise ValueError("conductances must be positive")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise ValueError("self-loops are not allowed")
        if len(edges) and (edges.min() < 0 or edges.max() >= num_vertices):
            raise ValueError("edge endpoint out of range")

        edges = np.sort(edges, axis=1)
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        edges, g = edges[order], g[order]
        if len(edges) > 1 and np.any(np.all(edges[1:] == edges[:-1], axis=1)):
            raise ValueError("duplicate edges are not allowed")

        edges.setflags(write=False)
        g.setflags(write=False)
        self.num_vertices = int(num_vertices)
        self.edges = edges
        self.conductances = g

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def laplacian(self) -> sp.csr_matrix:
        """Weighted graph Laplacian L = D - W."""
        i, j = self.edges[:, 0], self.edges[:, 1]
        g = self.conductances
        n = self.num_vertices
        weights = sp.coo_matrix(
            (np.concatenate([g, g]), (np.concatenate([i, j]), np.concatenate([j, i]))), shape=(n, n)
        ).tocsr()
        degree = np.asarray(weights.sum(axis=1)).ravel()
        return (sp.diags(degree) - weights).tocsr()

    def adjacency(self) -> sp.csr_matrix:
        n = self.num_vertices
        return sp.coo_matrix(
            (np.ones(self.num_edges), (self.edges[:, 0], self.edges[:, 1])), shape=(n, n)
        ).tocsr()

    def components(self) -> tuple[int, np.ndarray]:
        return connected_components(self.adjacency(), directed=False)

    def without_edge(self, index: int) -> "ConductanceNetwork":
        keep = np.arange(self.num_edges) != index
        return ConductanceNetwork(self.num_vertices, self.edges[keep], self.conductances[keep])


def solve_dirichlet_system(
    matrix: sp.spmatrix,
    fixed: np.ndarray,
    fixed_values: np.ndarray,
    options: Optional[SolverOptions] = None,
) -> tuple[np.ndarray, str]:
    """
    Solve K u = 0 on the free nodes with u prescribed on ``fixed``.

    The constrained rows and columns are eliminated into the right-hand side,
    K_II u_I = -K_IB u_B, which keeps the reduced system symmetric positive definite.

    Returns:
        (u, method) with method "direct" or "cg".
    """
    options = options or SolverOptions()
    K = sp.csr_matrix(matrix)
    n = K.shape[0]
    u = np.zeros(n)
    fixed = np.asarray(fixed, dtype=np.int64)
    u[fixed] = fixed_values

    free_mask = np.ones(n, dtype=bool)
    free_mask[fixed] = False
    free = np.flatnonzero(free_mask)
    if len(free) == 0:
        return u, "direct"

    K_ii = K[free][:, free].tocsc()
    rhs = -(K[free][:, fixed] @ u[fixed])

    if len(free) <= options.direct_max_unknowns:
        method = "direct"
        u_free = np.atleast_1d(spsolve(K_ii, rhs))
    else:
        method = "cg"
        maxiter = int(options.cg_iter_factor * math.sqrt(len(free)))
        diagonal = K_ii.diagonal()
        preconditioner = sp.diags(1.0 / diagonal)
        u_free, info = cg(K_ii, rhs, rtol=options.rtol, maxiter=maxiter, M=preconditioner)
        if info != 0:
            raise SolverError(f"CG did not reach rtol={options.rtol} in {maxiter} iterations")

    if not np.all(np.isfinite(u_free)):
        raise SolverError("linear solve produced non-finite values (singular system?)")
    log.debug(f"Solved {len(free)} unknowns ({method})")
    u[free] = u_free
    return u, method
