"""
Currents on a conductance network: the optimal current, its energy, and fluxes.
"""

import math
from dataclasses import dataclass

import numpy as np

from carpetres.errors import InvalidBoundaryError
from carpetres.geometry.cells import BoundaryClass, side_class
from carpetres.network.conductance import ConductanceNetwork
from carpetres.network.potential import PotentialVector


@dataclass(frozen=True, eq=False)
class CurrentAssignment:
    """
    Edge currents I(x, y), stored once per edge (x < y).

    I(y, x) = -I(x, y) is implied; ``at`` evaluates either orientation.
    """

    num_vertices: int
    edges: np.ndarray
    values: np.ndarray

    def at(self, x: int, y: int) -> float:
        lo, hi = (x, y) if x < y else (y, x)
        hits = np.flatnonzero((self.edges[:, 0] == lo) & (self.edges[:, 1] == hi))
        if hits.size == 0:
            return 0.0
        value = float(self.values[hits[0]])
        return value if x < y else -value

    def divergence(self) -> np.ndarray:
        """div I(x) = sum_y I(x, y), the net current leaving x."""
        return (np.bincount(self.edges[:, 0], weights=self.values, minlength=self.num_vertices)
                - np.bincount(self.edges[:, 1], weights=self.values, minlength=self.num_vertices))

    def scaled(self, factor: float) -> "CurrentAssignment":
        return CurrentAssignment(self.num_vertices, self.edges, factor * self.values)


def current_from_potential(net: ConductanceNetwork, u, scale: float = 1.0) -> CurrentAssignment:
    """
    I(x, y) = scale * g(x, y) (u(y) - u(x)).

    With u the optimal 0/1 potential and scale = R(A, B) this is the optimal
    unit-flux current from A to B.
    """
    values = np.asarray(u.values if isinstance(u, PotentialVector) else u, dtype=float)
    i, j = net.edges[:, 0], net.edges[:, 1]
    return CurrentAssignment(net.num_vertices, net.edges,
                             scale * net.conductances * (values[j] - values[i]))


def current_energy(net: ConductanceNetwork, current: CurrentAssignment) -> float:
    """E(I, I) = sum over edges of I(x, y)^2 / g(x, y)."""
    return math.fsum(current.values * current.values / net.conductances)


def kirchhoff_residual(net: ConductanceNetwork, current: CurrentAssignment, A, B) -> float:
    """Largest |div I| over vertices outside A and B."""
    interior = np.ones(net.num_vertices, dtype=bool)
    interior[np.asarray(A, dtype=np.int64)] = False
    interior[np.asarray(B, dtype=np.int64)] = False
    div = current.divergence()[interior]
    return float(np.abs(div).max()) if div.size else 0.0


def side_flux(graph, current: CurrentAssignment, k: int) -> float:
    """
    Flux of the current through the electrode side L_k of a graph approximation.

    The sign convention makes the optimal unit current from A to B carry
    -1/N through every A side and +1/N through every B side.
    """
    if side_class(graph.params, k) is BoundaryClass.OTHER:
        raise InvalidBoundaryError(f"L_{k} is neither an A nor a B side")
    vertices = graph.vertices_on_side(k)
    return -math.fsum(current.divergence()[vertices])


def signed_potential(u) -> np.ndarray:
    """2u - 1: the optimal 0/1 potential rescaled to boundary values -1 on A, +1 on B."""
    values = np.asarray(u.values if isinstance(u, PotentialVector) else u, dtype=float)
    return 2.0 * values - 1.0
