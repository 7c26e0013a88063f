"""
Tests for carpet geometry: parameters, maps, cells and electrodes.

Run with: pytest tests/test_geometry.py -v
"""

import math

import numpy as np
import pytest
from scipy.spatial import cKDTree

from carpetres.errors import InvalidBoundaryError, LevelCapExceeded
from carpetres.geometry import (
    BoundaryClass,
    CarpetParams,
    apply_phi,
    apply_psi,
    apply_psi_tilde,
    apply_theta,
    boundary_segments,
    cell_polygons,
    cells_json,
    classify_points,
    contraction_ratio,
    emit_carpet_svg,
    enumerate_cells,
    hausdorff_dimension,
    outer_vertex,
    phi_cell_offsets,
    polygon_area,
)
from carpetres.geometry.cells import (
    CLASS_A,
    CLASS_B,
    CLASS_NONE,
    adjacent_cells_share_side,
    total_boundary_length,
)


@pytest.fixture
def octa():
    """The octacarpet, N = 2."""
    return CarpetParams.from_n(2)


def same_point_sets(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    if len(a) != len(b):
        return False
    dist, idx = cKDTree(b).query(a)
    return bool(dist.max() <= tol and len(np.unique(idx)) == len(a))


def side_of_some_cell(params: CarpetParams, p, q, exclude: int, tol: float = 1e-9) -> bool:
    polygons = cell_polygons(params, 1)
    for i, poly in enumerate(polygons):
        if i == exclude:
            continue
        for s in range(len(poly)):
            a, b = poly[s], poly[(s + 1) % len(poly)]
            if (np.linalg.norm(a - p) < tol and np.linalg.norm(b - q) < tol) or \
               (np.linalg.norm(a - q) < tol and np.linalg.norm(b - p) < tol):
                return True
    return False


# =============================================================================
# Parameters
# =============================================================================

class TestCarpetParams:
    """Tests for r(N), C_j and the dimension formula."""

    def test_contraction_ratio_closed_forms(self):
        assert contraction_ratio(2) == pytest.approx(1 / (2 + math.sqrt(2)), rel=1e-14)
        assert contraction_ratio(2) == pytest.approx(0.29289322, abs=1e-8)
        assert contraction_ratio(3) == pytest.approx(0.21132487, abs=1e-8)

    def test_contraction_ratio_decreases_and_stays_below_third(self):
        ratios = [contraction_ratio(N) for N in range(2, 12)]
        assert all(0 < r < 1 / 3 for r in ratios)
        assert all(b < a for a, b in zip(ratios, ratios[1:]))

    @pytest.mark.parametrize("N", [1, 0, -3, 2.5])
    def test_invalid_n_rejected(self, N):
        with pytest.raises(InvalidBoundaryError):
            contraction_ratio(N)

    def test_outer_vertices(self, octa):
        # C_j = exp((2j - 1) i pi / 4N): C_1 sits at angle pi/8, C_0 at -pi/8.
        assert np.allclose(outer_vertex(octa, 1), [0.9238795, 0.3826834], atol=1e-7)
        assert np.allclose(outer_vertex(octa, 0), [0.9238795, -0.3826834], atol=1e-7)
        assert np.allclose(outer_vertex(octa, 8), outer_vertex(octa, 0))
        assert np.allclose(np.linalg.norm(octa.vertices, axis=1), 1.0)

    def test_outer_vertex_n3(self):
        params = CarpetParams.from_n(3)
        expected = [math.cos(math.pi / 12), math.sin(math.pi / 12)]
        assert np.allclose(outer_vertex(params, 1), expected, atol=1e-12)
        assert np.allclose(outer_vertex(params, 1), [0.9659258, 0.2588190], atol=1e-7)

    def test_hausdorff_dimension(self):
        assert hausdorff_dimension(2) == pytest.approx(math.log(8) / math.log(2 + math.sqrt(2)), rel=1e-14)
        assert hausdorff_dimension(2) == pytest.approx(1.6934, abs=1e-3)
        assert hausdorff_dimension(3) == pytest.approx(1.5987, abs=1e-3)
        assert all(1 < hausdorff_dimension(N) < 2 for N in range(2, 10))

    def test_area_matches_shoelace(self, octa):
        assert polygon_area(octa.polygon()) == pytest.approx(octa.area(), rel=1e-14)


# =============================================================================
# Maps
# =============================================================================

class TestMaps:
    """Tests for phi_j, theta, psi_j and psi~_j."""

    def test_phi_fixes_vertex(self, octa):
        for j in range(8):
            assert np.allclose(apply_phi(octa, j, octa.vertex(j)), octa.vertex(j))

    def test_phi_of_origin(self, octa):
        assert np.allclose(apply_phi(octa, 0, [0.0, 0.0]), (1 - octa.r) * octa.vertex(0))

    def test_phi_ratio(self, octa):
        rng = np.random.default_rng(0)
        for j in range(8):
            z, w = rng.standard_normal((2, 2))
            d = np.linalg.norm(apply_phi(octa, j, z) - apply_phi(octa, j, w))
            assert d == pytest.approx(octa.r * np.linalg.norm(z - w), rel=1e-12)

    def test_theta(self, octa):
        z = np.array([0.3, -0.7])
        assert np.allclose(apply_theta(octa, 8, z), z)
        assert np.allclose(apply_theta(octa, 2, [1.0, 0.0]), [0.0, 1.0])
        for j in range(8):
            assert np.allclose(apply_theta(octa, 1, octa.vertex(j)), octa.vertex(j + 1))

    def test_psi_zero_is_phi_zero(self, octa):
        z = np.array([0.1, 0.2])
        assert np.allclose(apply_psi(octa, 0, z), apply_phi(octa, 0, z))

    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_psi_images_are_phi_cells(self, N):
        params = CarpetParams.from_n(N)
        polygons = cell_polygons(params, 1)
        for j in range(4 * N):
            assert same_point_sets(apply_psi(params, j, params.vertices), polygons[j])
            assert same_point_sets(apply_psi_tilde(params, j, params.vertices), polygons[j])

    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_psi_puts_l0_on_electrodes(self, N):
        params = CarpetParams.from_n(N)
        tol = params.tolerance(1)
        for j in range(4 * N):
            mid = apply_psi(params, j, params.side_midpoint(0))
            codes, _ = classify_points(params, mid, tol)
            assert codes[0] in (CLASS_A, CLASS_B)

    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_psi_tilde_inner_sides_are_shared(self, N):
        params = CarpetParams.from_n(N)
        for j in range(4 * N):
            for side in (N, 3 * N - 1):
                p, q = apply_psi_tilde(params, j, np.stack(params.side(side)))
                assert side_of_some_cell(params, p, q, exclude=j), (j, side)


# =============================================================================
# Cells
# =============================================================================

class TestCells:
    """Tests for cell enumeration and tiling."""

    def test_counts(self, octa):
        assert len(enumerate_cells(octa, 0)) == 1
        assert len(enumerate_cells(octa, 2)) == 64

    def test_level_zero_is_identity(self, octa):
        (cell,) = enumerate_cells(octa, 0)
        assert cell.word == ()
        assert np.allclose(cell.map.matrix, np.eye(2))

    def test_cell_maps_are_similarities(self, octa):
        for cell in enumerate_cells(octa, 2):
            assert cell.map.ratio == pytest.approx(octa.r ** 2, rel=1e-12)
            M = cell.map.matrix / octa.r ** 2
            assert np.allclose(M.T @ M, np.eye(2), atol=1e-12)

    @pytest.mark.parametrize("N,m", [(2, 1), (2, 2), (3, 2)])
    def test_total_area(self, N, m):
        params = CarpetParams.from_n(N)
        total = sum(abs(polygon_area(c.polygon(params))) for c in enumerate_cells(params, m))
        expected = (4 * N * params.r ** 2) ** m * params.area()
        assert total == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("N,m", [(2, 2), (3, 2), (2, 3)])
    def test_psi_cells_match_phi_cells(self, N, m):
        params = CarpetParams.from_n(N)
        centers = np.array([c.center() for c in enumerate_cells(params, m)])
        assert same_point_sets(centers, phi_cell_offsets(params, m), tol=1e-12)

    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_adjacent_cells_share_a_side(self, N):
        assert adjacent_cells_share_side(CarpetParams.from_n(N))

    def test_level_one_cells_do_not_overlap(self, octa):
        centers = phi_cell_offsets(octa, 1)
        inscribed = octa.r * octa.apothem
        for i in range(8):
            for j in range(i + 1, 8):
                assert np.linalg.norm(centers[i] - centers[j]) >= 2 * inscribed - 1e-12

    def test_level_cap(self, octa):
        with pytest.raises(LevelCapExceeded):
            enumerate_cells(octa, 3, max_cells=100)

    def test_cells_json(self, octa):
        dump = cells_json(octa, 1)
        assert dump["N"] == 2 and dump["level"] == 1
        assert len(dump["cells"]) == 8
        assert len(dump["cells"][0]["vertices"]) == 8


# =============================================================================
# Electrodes
# =============================================================================

class TestBoundary:
    """Tests for A_n, B_n and point classification."""

    def test_level_zero_n2(self, octa):
        segments = boundary_segments(octa, 0)
        assert sorted(s.outer_index for s in segments if s.boundary_class is BoundaryClass.A) == [0, 4]
        assert sorted(s.outer_index for s in segments if s.boundary_class is BoundaryClass.B) == [2, 6]

    def test_level_zero_n3(self):
        segments = boundary_segments(CarpetParams.from_n(3), 0)
        assert sorted(s.outer_index for s in segments if s.boundary_class is BoundaryClass.A) == [0, 4, 8]
        assert sorted(s.outer_index for s in segments if s.boundary_class is BoundaryClass.B) == [2, 6, 10]

    def test_level_two_counts(self, octa):
        segments = boundary_segments(octa, 2)
        assert sum(s.boundary_class is BoundaryClass.A for s in segments) == 8
        assert sum(s.boundary_class is BoundaryClass.B for s in segments) == 8

    def test_include_other(self, octa):
        segments = boundary_segments(octa, 1, include_other=True)
        assert sum(s.boundary_class is BoundaryClass.OTHER for s in segments) == 8
        assert len(segments) == 16

    @pytest.mark.parametrize("N,n", [(2, 0), (2, 3), (3, 2), (5, 1)])
    def test_total_length(self, N, n):
        params = CarpetParams.from_n(N)
        total = sum(s.length for s in boundary_segments(params, n))
        assert total == pytest.approx(total_boundary_length(params, n), abs=1e-10)

    def test_segments_lie_on_their_side(self, octa):
        for seg in boundary_segments(octa, 2):
            codes, side = classify_points(octa, np.stack([seg.start, seg.end, seg.midpoint]), 1e-9)
            assert set(side) == {seg.outer_index}

    def test_classify_points(self, octa):
        points = np.stack([octa.side_midpoint(0), octa.side_midpoint(2), octa.side_midpoint(1), np.zeros(2)])
        codes, side = classify_points(octa, points, 1e-9)
        assert list(codes) == [CLASS_A, CLASS_B, CLASS_NONE, CLASS_NONE]
        assert list(side) == [0, 2, -1, -1]


# =============================================================================
# SVG
# =============================================================================

class TestSvg:
    """Tests for the carpet drawings."""

    def test_single_octagon(self, octa):
        assert emit_carpet_svg(octa, 0).count("<path") == 1

    def test_level_two(self, octa):
        assert emit_carpet_svg(octa, 2).count("<path") == 64

    def test_highlight(self, octa):
        text = emit_carpet_svg(octa, 0, highlight_ab=True)
        assert text.count("<line") == 4

    def test_deterministic(self, octa, tmp_path):
        first = emit_carpet_svg(octa, 2, highlight_ab=True, path=tmp_path / "a.svg")
        second = emit_carpet_svg(octa, 2, highlight_ab=True, path=tmp_path / "b.svg")
        assert first == second
        assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
        assert first.startswith("<?xml")
