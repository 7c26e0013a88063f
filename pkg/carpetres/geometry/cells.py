"""
Cells of the pre-carpets F_m, their addresses, and the boundary sets A_n, B_n.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from carpetres.errors import LevelCapExceeded
from carpetres.geometry.carpet import AffineMap, CarpetParams, psi_map, psi_tilde_map
from carpetres.utils.logger import log

DEFAULT_MAX_CELLS = 4_000_000


class BoundaryClass(str, Enum):
    """Which electrode, if any, a piece of the outer boundary belongs to."""

    A = "A"
    B = "B"
    OTHER = "other"


# Integer codes used by the vectorised classifiers.
CLASS_NONE = 0
CLASS_A = 1
CLASS_B = 2


@dataclass(frozen=True, eq=False)
class CellAddress:
    """A cell psi_w(F_0) of F_m with its word w = w_1...w_m and composed map."""

    word: tuple[int, ...]
    map: AffineMap

    @property
    def level(self) -> int:
        return len(self.word)

    def polygon(self, params: CarpetParams) -> np.ndarray:
        return self.map(params.vertices)

    def center(self) -> np.ndarray:
        return self.map(np.zeros(2))


@dataclass(frozen=True, eq=False)
class SideSegment:
    """A maximal piece of F_n lying on an outer side L_j."""

    level: int
    start: np.ndarray
    end: np.ndarray
    outer_index: Optional[int]
    boundary_class: BoundaryClass

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.start + self.end)


def side_class(params: CarpetParams, k: int) -> BoundaryClass:
    """L_{4i} belongs to A, L_{4i+2} to B, odd sides to neither."""
    k = params.index(k)
    if k % 4 == 0:
        return BoundaryClass.A
    if k % 4 == 2:
        return BoundaryClass.B
    return BoundaryClass.OTHER


def check_cell_cap(params: CarpetParams, m: int, max_cells: int = DEFAULT_MAX_CELLS) -> int:
    if m < 0:
        raise ValueError(f"level must be non-negative, got {m}")
    count = params.num_cells_per_level ** m
    if count > max_cells:
        raise LevelCapExceeded(f"(4N)^m cells for N={params.N}, m={m}", count, max_cells)
    return count


def _stack_maps(maps: list[AffineMap]) -> tuple[np.ndarray, np.ndarray]:
    return (np.stack([f.matrix for f in maps]), np.stack([f.offset for f in maps]))


def cell_maps(params: CarpetParams, m: int,
              max_cells: int = DEFAULT_MAX_CELLS) -> tuple[np.ndarray, np.ndarray]:
    """
    Vectorised psi_w for all words of length m, in lexicographic word order.

    Returns:
        (matrices, offsets) with shapes (K, 2, 2) and (K, 2), K = (4N)^m.
    """
    check_cell_cap(params, m, max_cells)
    n = params.num_cells_per_level
    if m == 0:
        return np.eye(2)[None, :, :], np.zeros((1, 2))

    tilde_m, tilde_o = _stack_maps([psi_tilde_map(params, j) for j in range(n)])
    # Tail compositions psi~_{w_2} ∘ ... ∘ psi~_{w_m}, built right to left.
    tail_m, tail_o = np.eye(2)[None, :, :], np.zeros((1, 2))
    for _ in range(m - 1):
        tail_m = np.einsum("aij,bjk->abik", tilde_m, tail_m).reshape(-1, 2, 2)
        tail_o = (np.einsum("aij,bj->abi", tilde_m, tail_o) + tilde_o[:, None, :]).reshape(-1, 2)

    head_m, head_o = _stack_maps([psi_map(params, j) for j in range(n)])
    matrices = np.einsum("aij,bjk->abik", head_m, tail_m).reshape(-1, 2, 2)
    offsets = (np.einsum("aij,bj->abi", head_m, tail_o) + head_o[:, None, :]).reshape(-1, 2)
    log.debug(f"Built {len(offsets)} cell maps for N={params.N}, m={m}")
    return matrices, offsets


def enumerate_cells(params: CarpetParams, m: int,
                    max_cells: int = DEFAULT_MAX_CELLS) -> list[CellAddress]:
    """All (4N)^m cell addresses of F_m with maps psi_w = psi_{w1} ∘ psi~_{w2} ∘ ... ∘ psi~_{wm}."""
    matrices, offsets = cell_maps(params, m, max_cells)
    words = itertools.product(range(params.num_cells_per_level), repeat=m)
    return [CellAddress(word=tuple(w), map=AffineMap(M, o))
            for w, M, o in zip(words, matrices, offsets)]


def phi_cell_offsets(params: CarpetParams, m: int,
                     max_cells: int = DEFAULT_MAX_CELLS) -> np.ndarray:
    """
    Offsets t_w of the plain compositions phi_w(z) = r^m z + t_w, lexicographic word order.

    These cells are the same point sets as the psi_w cells but keep F_0's orientation.
    """
    check_cell_cap(params, m, max_cells)
    r = params.r
    offsets = np.zeros((1, 2))
    for _ in range(m):
        offsets = (r * offsets[None, :, :]
                   + (1.0 - r) * params.vertices[:, None, :]).reshape(-1, 2)
    return offsets


def cell_polygons(params: CarpetParams, m: int,
                  max_cells: int = DEFAULT_MAX_CELLS) -> np.ndarray:
    """Vertex rings of all cells of F_m, shape (K, 4N, 2)."""
    offsets = phi_cell_offsets(params, m, max_cells)
    return params.r ** m * params.vertices[None, :, :] + offsets[:, None, :]


def polygon_area(polygon: np.ndarray) -> float:
    """Shoelace area of a vertex ring (positive for counter-clockwise order)."""
    x, y = polygon[:, 0], polygon[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def boundary_segments(params: CarpetParams, n: int, include_other: bool = False,
                      max_cells: int = DEFAULT_MAX_CELLS) -> list[SideSegment]:
    """
    Maximal pieces of F_n on the outer sides: A pieces on L_{4k}, B pieces on L_{4k+2}.

    The pieces of F_n on L_k are the sides phi_w(L_k) with w in {k, k+1}^n, so each
    outer side contributes 2^n pieces of length r^n |L_k|.
    """
    check_cell_cap(params, n, max_cells)
    segments = []
    for k in range(params.num_cells_per_level):
        cls = side_class(params, k)
        if cls is BoundaryClass.OTHER and not include_other:
            continue
        start, end = params.side(k)
        for word in itertools.product((k, k + 1), repeat=n):
            a, b = start, end
            for letter in reversed(word):
                c = params.vertex(letter)
                a = params.r * (a - c) + c
                b = params.r * (b - c) + c
            segments.append(SideSegment(level=n, start=a, end=b, outer_index=k, boundary_class=cls))
    return segments


def classify_points(params: CarpetParams, points: np.ndarray,
                    tol: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Classify points of F_n against the electrodes.

    A point of F_n is in A_n (B_n) exactly when it lies on a line L_{4k} (L_{4k+2}),
    because F_n ∩ L_j is the union of the level-n pieces of L_j.

    Returns:
        (codes, side) where codes is CLASS_A / CLASS_B / CLASS_NONE and side is the
        index j of the even side the point lies on, or -1.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    even = np.arange(0, params.num_cells_per_level, 2)
    distance = np.abs(pts @ params.side_normals[even].T - params.apothem)
    on_line = distance <= tol
    hit = on_line.any(axis=1)
    side = np.where(hit, even[np.argmax(on_line, axis=1)], -1)
    codes = np.full(len(pts), CLASS_NONE, dtype=np.int8)
    codes[hit & (side % 4 == 0)] = CLASS_A
    codes[hit & (side % 4 == 2)] = CLASS_B
    return codes, side


def shared_side(poly_a: np.ndarray, poly_b: np.ndarray,
                tol: float) -> Optional[tuple[np.ndarray, np.ndarray]]:
    """The side common to two cell polygons (endpoints coincide within tol), or None."""
    n = len(poly_a)
    sides_b = [(poly_b[i], poly_b[(i + 1) % len(poly_b)]) for i in range(len(poly_b))]
    for i in range(n):
        a0, a1 = poly_a[i], poly_a[(i + 1) % n]
        for b0, b1 in sides_b:
            direct = np.linalg.norm(a0 - b0) <= tol and np.linalg.norm(a1 - b1) <= tol
            flipped = np.linalg.norm(a0 - b1) <= tol and np.linalg.norm(a1 - b0) <= tol
            if direct or flipped:
                return a0, a1
    return None


def adjacent_cells_share_side(params: CarpetParams, tol: float = 1e-9) -> bool:
    """Check that phi_j(F_0) and phi_{j+1}(F_0) share a full side for every j."""
    polygons = cell_polygons(params, 1)
    n = params.num_cells_per_level
    return all(shared_side(polygons[j], polygons[(j + 1) % n], tol) is not None for j in range(n))


def cells_json(params: CarpetParams, n: int, max_cells: int = DEFAULT_MAX_CELLS) -> dict:
    """JSON-ready dump of the cell polygons of F_n."""
    polygons = cell_polygons(params, n, max_cells)
    words = itertools.product(range(params.num_cells_per_level), repeat=n)
    return {
        "N": params.N,
        "level": n,
        "cells": [
            {"word": list(w), "vertices": poly.tolist()}
            for w, poly in zip(words, polygons)
        ],
    }


def total_boundary_length(params: CarpetParams, n: int) -> float:
    """Closed form 2N |L_0| (2r)^n of the A and B pieces together."""
    return 2 * params.N * params.side_length * (2 * params.r) ** n
