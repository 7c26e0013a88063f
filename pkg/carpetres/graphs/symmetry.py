"""
Vertex permutations induced by the carpet symmetries theta^2 and conjugation.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial import cKDTree

from carpetres.errors import SymmetryViolation
from carpetres.geometry.carpet import AffineMap, theta_map
from carpetres.graphs.builder import GraphApprox


class Symmetry(str, Enum):
    THETA2 = "theta2"
    CONJ = "conj"


@dataclass(frozen=True, eq=False)
class SymmetryPermutation:
    """
    perm[x] is the vertex at the image of x.

    For a potential u, ``pullback(u)`` is u composed with the symmetry.
    """

    symmetry: Symmetry
    perm: np.ndarray
    swaps_AB: bool

    def pullback(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values)[self.perm]

    def power(self, k: int) -> np.ndarray:
        result = np.arange(len(self.perm))
        for _ in range(k):
            result = self.perm[result]
        return result


def _geometric_map(graph: GraphApprox, sym: Symmetry) -> AffineMap:
    if sym is Symmetry.THETA2:
        return theta_map(graph.params, 2)
    return AffineMap.conjugation()


def _same_edge_set(graph: GraphApprox, perm: np.ndarray) -> bool:
    mapped = np.sort(perm[graph.edges], axis=1)
    mapped = mapped[np.lexsort((mapped[:, 1], mapped[:, 0]))]
    return bool(np.array_equal(mapped, graph.edges))


def symmetry_permutation(graph: GraphApprox, sym: Symmetry | str) -> SymmetryPermutation:
    """
    Match every vertex of G_m / D_m with the vertex at its image under theta^2 or conj.

    theta^2 exchanges A_m and B_m; conjugation preserves each.

    Raises:
        SymmetryViolation: an image has no vertex within tolerance, the matching is
            not a bijection, or it fails to preserve the edges or electrodes.
    """
    sym = Symmetry(sym)
    if graph.level < 1:
        raise ValueError("symmetry permutations need a graph with electrodes (m >= 1)")

    images = _geometric_map(graph, sym)(graph.positions)
    dist, perm = cKDTree(graph.positions).query(images)
    limit = 10 * graph.tol
    if dist.max() > limit:
        raise SymmetryViolation(f"{sym.value}: vertex {int(np.argmax(dist))} has no image within {limit:.2e}")
    if len(np.unique(perm)) != len(perm):
        raise SymmetryViolation(f"{sym.value}: vertex matching is not a bijection")
    if not _same_edge_set(graph, perm):
        raise SymmetryViolation(f"{sym.value}: edge set is not preserved")

    swaps = sym is Symmetry.THETA2
    image_A = np.sort(perm[graph.boundary_A])
    expected = graph.boundary_B if swaps else graph.boundary_A
    if not np.array_equal(image_A, expected):
        raise SymmetryViolation(f"{sym.value}: electrode sets are not mapped as expected")

    perm.setflags(write=False)
    return SymmetryPermutation(symmetry=sym, perm=perm, swaps_AB=swaps)
