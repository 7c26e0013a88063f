"""
Optimal potentials and effective resistance of a conductance network.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from carpetres.errors import InvalidBoundaryError
from carpetres.network.conductance import ConductanceNetwork, SolverOptions, solve_dirichlet_system
from carpetres.utils.logger import log


@dataclass(frozen=True, eq=False)
class PotentialVector:
    """
    The energy-minimising potential with u = a_val on A and u = b_val on B.

    ``connected`` is False when no component of the network touches both A
    and B; the potential is then piecewise constant and the resistance infinite.
    """

    values: np.ndarray
    A: np.ndarray
    B: np.ndarray
    a_val: float = 0.0
    b_val: float = 1.0
    connected: bool = True
    solver: str = "direct"

    def __getitem__(self, index):
        return self.values[index]

    def __len__(self) -> int:
        return len(self.values)


def _boundary_sets(net: ConductanceNetwork, A, B) -> tuple[np.ndarray, np.ndarray]:
    A = np.unique(np.asarray(A, dtype=np.int64))
    B = np.unique(np.asarray(B, dtype=np.int64))
    if len(A) == 0 or len(B) == 0:
        raise InvalidBoundaryError("boundary sets A and B must both be non-empty")
    if np.intersect1d(A, B).size:
        raise InvalidBoundaryError(f"A and B overlap in {np.intersect1d(A, B).size} vertices")
    for name, ids in (("A", A), ("B", B)):
        if ids.min() < 0 or ids.max() >= net.num_vertices:
            raise InvalidBoundaryError(f"{name} contains a vertex outside 0..{net.num_vertices - 1}")
    return A, B


def solve_potential(
    net: ConductanceNetwork,
    A,
    B,
    a_val: float = 0.0,
    b_val: float = 1.0,
    options: Optional[SolverOptions] = None,
) -> PotentialVector:
    """
    Minimise the Dirichlet energy subject to u|_A = a_val and u|_B = b_val.

    Components touching no electrode are set to a_val (with a warning).

    Raises:
        InvalidBoundaryError: A or B empty, overlapping or out of range.
    """
    A, B = _boundary_sets(net, A, B)
    _, labels = net.components()
    connected = bool(np.intersect1d(labels[A], labels[B]).size)

    anchored = np.zeros(net.num_vertices, dtype=bool)
    anchored[np.isin(labels, labels[np.concatenate([A, B])])] = True
    floating = np.flatnonzero(~anchored)
    if floating.size:
        log.warning(f"{floating.size} vertices touch neither electrode; fixing them at {a_val}")

    fixed = np.concatenate([A, B, floating])
    values = np.concatenate([np.full(len(A), a_val), np.full(len(B), b_val),
                             np.full(len(floating), a_val)])
    u, method = solve_dirichlet_system(net.laplacian(), fixed, values, options)
    if not connected:
        log.warning("A and B lie in different components; resistance is infinite")
    return PotentialVector(values=u, A=A, B=B, a_val=a_val, b_val=b_val,
                           connected=connected, solver=method)


def dirichlet_energy(net: ConductanceNetwork, u) -> float:
    """E(u, u) = sum over edges of g(x, y) (u(x) - u(y))^2."""
    values = np.asarray(u.values if isinstance(u, PotentialVector) else u, dtype=float)
    diff = values[net.edges[:, 0]] - values[net.edges[:, 1]]
    return math.fsum(net.conductances * diff * diff)


def effective_resistance(net: ConductanceNetwork, A, B,
                         options: Optional[SolverOptions] = None) -> float:
    """R(A, B) = 1 / E(u, u) for the optimal 0/1 potential; inf if A and B are disconnected."""
    u = solve_potential(net, A, B, 0.0, 1.0, options)
    if not u.connected:
        return math.inf
    return 1.0 / dirichlet_energy(net, u)
