"""Geometric vertex identification."""

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from carpetres.errors import GeometryToleranceError
from carpetres.utils.logger import log


def snap_dedup(points: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Merge points closer than ``tol`` (transitively) into canonical vertices.

    Canonical ids are numbered in order of first occurrence, and each group is
    represented by its lexicographically smallest point.

    Returns:
        (ids, representatives): ids[i] is the canonical id of points[i].

    Raises:
        GeometryToleranceError: a merged group spans more than 10 * tol.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n == 0:
        return np.zeros(0, dtype=np.int64), np.zeros((0, 2))

    pairs = cKDTree(pts).query_pairs(tol, output_type="ndarray")
    adjacency = coo_matrix(
        (np.ones(len(pairs), dtype=np.int8), (pairs[:, 0], pairs[:, 1])), shape=(n, n)
    )
    count, labels = connected_components(adjacency, directed=False)

    _, first = np.unique(labels, return_index=True)
    renumber = np.empty(count, dtype=np.int64)
    renumber[np.argsort(first, kind="stable")] = np.arange(count)
    ids = renumber[labels]

    order = np.lexsort((pts[:, 1], pts[:, 0]))
    _, first_sorted = np.unique(ids[order], return_index=True)
    representatives = pts[order[first_sorted]]

    spread = np.linalg.norm(pts - representatives[ids], axis=1)
    if spread.size and spread.max() > 10 * tol:
        worst = int(np.argmax(spread))
        raise GeometryToleranceError(
            f"point {worst} merged {spread[worst]:.3e} away from its representative "
            f"(tolerance {tol:.3e})"
        )
    log.debug(f"snap_dedup: {n} points -> {count} vertices (tol={tol:.2e})")
    return ids, representatives
