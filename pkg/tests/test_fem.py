"""
Tests for the pre-carpet meshes, the mixed problem and the sector identities.

Run with: pytest tests/test_fem.py -v
"""

import json
import math

import numpy as np
import pytest
from scipy.spatial import cKDTree

from carpetres.errors import (
    FluxSumError,
    InvalidBoundaryError,
    LevelCapExceeded,
    MeshConstructionError,
)
from carpetres.fem import (
    beta_coefficients,
    beta_square_bound,
    beta_square_sum,
    build_mesh,
    convergence_table,
    corner_indices,
    glued_current_energy,
    glued_potential_energy,
    node_permutation,
    normalize_pm1,
    sector_analysis,
    solve_mixed_bvp,
    unit_square_mesh,
)
from carpetres.fem.export import convergence_csv, mesh_json, solution_csv
from carpetres.fem.mesh import DIRICHLET_A, DIRICHLET_B, NEUMANN, expected_triangle_count
from carpetres.fem.sectors import SectorData, triangle_sectors
from carpetres.fem.solver import aitken, element_energies
from carpetres.geometry import AffineMap, CarpetParams, theta_map


@pytest.fixture
def octa():
    return CarpetParams.from_n(2)


def synthetic_sector(N: int, R: float, share: float) -> SectorData:
    """Sector data satisfying 4/R = 2N (E_v + E_w) exactly."""
    total = 2.0 / (N * R)
    return SectorData(N=N, R=R, E_v=share * total, E_w=(1 - share) * total,
                      orthogonality=0.0, theta2_residual=0.0, conj_residual=0.0,
                      sector_energies=(total,) * (4 * N))


# =============================================================================
# Meshes
# =============================================================================

class TestMesh:
    """Tests for the fan-and-refine triangulation of F_n."""

    def test_fan(self, octa):
        mesh = build_mesh(octa, 0, 0)
        assert mesh.num_triangles == 8
        assert mesh.num_nodes == 9

    def test_refined_fan(self, octa):
        assert build_mesh(octa, 0, 1).num_triangles == 32
        assert build_mesh(octa, 0, 1).num_nodes == 25
        assert build_mesh(octa, 0, 2).num_nodes == 81

    def test_level_one(self, octa):
        mesh = build_mesh(octa, 1, 0)
        assert mesh.num_triangles == 64
        assert mesh.num_nodes == 56
        assert len(cKDTree(mesh.nodes).query_pairs(1e-9)) == 0

    @pytest.mark.parametrize("N,n,k", [(2, 1, 2), (3, 1, 1), (2, 2, 1)])
    def test_triangle_count(self, N, n, k):
        params = CarpetParams.from_n(N)
        mesh = build_mesh(params, n, k)
        assert mesh.num_triangles == expected_triangle_count(params, n, k)

    def test_conforming(self, octa):
        mesh = build_mesh(octa, 1, 2)
        edges = np.sort(np.concatenate([mesh.triangles[:, [0, 1]], mesh.triangles[:, [1, 2]],
                                        mesh.triangles[:, [2, 0]]]), axis=1)
        _, counts = np.unique(edges, axis=0, return_counts=True)
        assert counts.max() == 2

    def test_positive_orientation(self, octa):
        assert np.all(build_mesh(octa, 1, 1).areas() > 0)

    def test_total_area(self, octa):
        mesh = build_mesh(octa, 2, 0)
        assert mesh.areas().sum() == pytest.approx((8 * octa.r ** 2) ** 2 * octa.area(), rel=1e-12)

    def test_markers(self, octa):
        mesh = build_mesh(octa, 0, 1)
        # two refined sides per electrode class, three nodes each
        assert len(mesh.nodes_A) == 6
        assert len(mesh.nodes_B) == 6
        assert np.sum(mesh.markers == NEUMANN) == 4
        assert mesh.markers[0] == 0

    @pytest.mark.parametrize("n", [0, 1])
    def test_symmetric_node_set(self, octa, n):
        mesh = build_mesh(octa, n, 1)
        for transform in (theta_map(octa, 1), AffineMap.conjugation()):
            perm = node_permutation(mesh, transform)
            assert sorted(perm) == list(range(mesh.num_nodes))

    def test_asymmetric_transform_rejected(self, octa):
        mesh = build_mesh(octa, 0, 1)
        with pytest.raises(MeshConstructionError):
            node_permutation(mesh, AffineMap.rotation(0.1))

    def test_triangle_cap(self, octa):
        with pytest.raises(LevelCapExceeded):
            build_mesh(octa, 2, 3, max_triangles=1000)

    def test_negative_arguments(self, octa):
        with pytest.raises(ValueError):
            build_mesh(octa, -1, 0)


# =============================================================================
# Mixed problem
# =============================================================================

class TestSolver:
    """Tests for the P1 solve of the mixed boundary value problem."""

    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_unit_square(self, k):
        solution = solve_mixed_bvp(unit_square_mesh(k))
        assert solution.R_est == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(solution.values, solution.mesh.nodes[:, 0], atol=1e-12)

    def test_boundary_values(self, octa):
        solution = solve_mixed_bvp(build_mesh(octa, 1, 1))
        mesh = solution.mesh
        assert np.all(solution.values[mesh.markers == DIRICHLET_A] == 0.0)
        assert np.all(solution.values[mesh.markers == DIRICHLET_B] == 1.0)
        assert solution.values.min() >= -1e-12 and solution.values.max() <= 1 + 1e-12

    def test_refinement_increases_resistance(self, octa):
        table = convergence_table(octa, 0, 4)
        R = [row.R_est for row in table.rows]
        deltas = [row.delta for row in table.rows[1:]]
        assert all(b > a for a, b in zip(R, R[1:]))
        assert all(d > 0 for d in deltas)
        assert all(b < a for a, b in zip(deltas[1:], deltas[2:]))
        assert table.aitken_estimate is not None and table.aitken_estimate > R[-1]

    def test_normalize(self, octa):
        solution = solve_mixed_bvp(build_mesh(octa, 0, 2))
        u = normalize_pm1(solution)
        mesh = solution.mesh
        assert np.all(u[mesh.nodes_A] == -1.0)
        assert np.all(u[mesh.nodes_B] == 1.0)
        energy = math.fsum(element_energies(solution.local, mesh.triangles, u))
        assert energy == pytest.approx(4.0 / solution.R_est, rel=1e-12)

    def test_missing_electrode(self, octa):
        mesh = build_mesh(octa, 0, 0)
        stripped = type(mesh)(**{**mesh.__dict__, "markers": np.where(mesh.markers == 2, 3, mesh.markers)})
        with pytest.raises(InvalidBoundaryError):
            solve_mixed_bvp(stripped)

    def test_aitken(self):
        values = [1 - 0.5 ** k for k in range(1, 6)]
        assert aitken(values) == pytest.approx(1.0, abs=1e-12)
        assert aitken([1.0, 2.0]) is None
        assert aitken([1.0, 2.0, 3.0]) is None


# =============================================================================
# Sectors
# =============================================================================

class TestSectors:
    """Tests for the sector energies of u_n."""

    def test_sectors_are_balanced(self, octa):
        mesh = build_mesh(octa, 1, 1)
        counts = np.bincount(triangle_sectors(mesh), minlength=8)
        assert np.all(counts == counts[0])

    @pytest.mark.parametrize("n,k", [(0, 3), (0, 4), (1, 2)])
    def test_identities(self, octa, n, k):
        data = sector_analysis(solve_mixed_bvp(build_mesh(octa, n, k)))
        assert data.orthogonality_relative <= 1e-9
        assert data.identity_residual <= 1e-9
        assert data.theta2_residual <= 1e-9
        assert data.conj_residual <= 1e-9
        assert data.E_v > 0 and data.E_w > 0
        assert math.fsum(data.sector_energies) == pytest.approx(4.0 / data.R, rel=1e-9)
        assert data.E_V == pytest.approx(data.R ** 2 * data.E_v)

    @pytest.mark.parametrize("n", [0, 1])
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_identity_residuals_up_to_k4(self, octa, n, k):
        data = sector_analysis(solve_mixed_bvp(build_mesh(octa, n, k)))
        assert data.orthogonality_relative <= 1e-9
        assert data.identity_residual <= 1e-9

    def test_sector_energies_alternate(self, octa):
        data = sector_analysis(solve_mixed_bvp(build_mesh(octa, 0, 3)))
        energies = np.array(data.sector_energies)
        assert np.allclose(energies[0::2], data.E_v, rtol=1e-9)
        assert np.allclose(energies[1::2], data.E_w, rtol=1e-9)

    def test_n3(self):
        params = CarpetParams.from_n(3)
        data = sector_analysis(solve_mixed_bvp(build_mesh(params, 0, 3)))
        assert data.identity_residual <= 1e-9
        assert data.orthogonality_relative <= 1e-9

    def test_square_rejected(self):
        with pytest.raises(MeshConstructionError):
            sector_analysis(solve_mixed_bvp(unit_square_mesh(1)))


# =============================================================================
# Gluing coefficients and energies
# =============================================================================

class TestGluing:
    """Tests for beta_j and the glued energies."""

    def test_beta_example(self):
        beta = beta_coefficients(2, 1.0, -1.0, 0.0)
        assert beta.tolist() == [-1.0, -4.0, -1.0, 2.0, 2.0, 2.0, 2.0, 2.0]
        assert beta_square_sum(2, 1.0, -1.0, 0.0) == 38.0
        assert beta_square_bound(2, 1.0, -1.0, 0.0) == 51.0

    def test_beta_zero(self):
        assert np.all(beta_coefficients(3, 0.0, 0.0, 0.0) == 0.0)

    def test_flux_sum_enforced(self):
        with pytest.raises(FluxSumError):
            beta_coefficients(2, 1.0, 1.0, 1.0)

    @pytest.mark.parametrize("N", range(2, 9))
    def test_closed_form_and_bound(self, N):
        rng = np.random.default_rng(N)
        for _ in range(2000):
            I_0, I_N = rng.uniform(-1, 1, size=2)
            I_3N1 = -I_0 - I_N
            beta = beta_coefficients(N, I_0, I_N, I_3N1)
            square_sum = beta_square_sum(N, I_0, I_N, I_3N1)
            assert math.fsum(beta * beta) == pytest.approx(square_sum, rel=1e-12, abs=1e-14)
            assert square_sum <= beta_square_bound(N, I_0, I_N, I_3N1) * (1 + 1e-12)
            assert square_sum <= 2 * (11 * N - 8) * (I_0 ** 2 + I_N ** 2 + I_3N1 ** 2) * (1 + 1e-12)

    @pytest.mark.parametrize("N,share", [(2, 0.3), (3, 0.7), (5, 0.5)])
    def test_glued_current_bounds(self, N, share):
        sector = synthetic_sector(N, R=1.3, share=share)
        rng = np.random.default_rng(11)
        for _ in range(200):
            I_0, I_N = rng.uniform(-1, 1, size=2)
            glued = glued_current_energy(N, sector, I_0, I_N, -I_0 - I_N)
            assert glued.energy <= glued.bound * (1 + 1e-12)
            assert glued.bound <= glued.resistance_bound * (1 + 1e-12)

    def test_glued_current_zero(self):
        glued = glued_current_energy(2, synthetic_sector(2, 1.0, 0.5), 0.0, 0.0, 0.0)
        assert glued.energy == 0.0

    @pytest.mark.parametrize("N", [2, 3, 4])
    def test_glued_potential_bounds(self, N):
        sector = synthetic_sector(N, R=0.8, share=0.6)
        rng = np.random.default_rng(3)
        for _ in range(200):
            z = {j: rng.uniform(-1, 1) for j in corner_indices(N)}
            glued = glued_potential_energy(N, sector, z)
            assert 0 <= glued.energy <= glued.bound * (1 + 1e-12)
            assert glued.bound == pytest.approx(glued.resistance_bound, rel=1e-12)

    def test_glued_potential_zero(self):
        glued = glued_potential_energy(2, synthetic_sector(2, 1.0, 0.5), {j: 0.0 for j in corner_indices(2)})
        assert glued.energy == 0.0

    @pytest.mark.parametrize("j", [4, 7])
    def test_glued_potential_rejects_other_corners(self, j):
        # For N=2 the corners of D_0 are C_0, C_1, C_2, C_3, C_5, C_6.
        with pytest.raises(InvalidBoundaryError):
            glued_potential_energy(2, synthetic_sector(2, 1.0, 0.5), {j: 1.0})

    def test_glued_potential_single_corner(self):
        glued = glued_potential_energy(2, synthetic_sector(2, 1.0, 0.5), {2: 1.0})
        assert glued.energy == pytest.approx(0.5, rel=1e-15)
        assert glued.bound == pytest.approx(1.0, rel=1e-15)

    def test_with_fem_sector_data(self, octa):
        data = sector_analysis(solve_mixed_bvp(build_mesh(octa, 0, 3)))
        glued = glued_current_energy(2, data, 1.0, -1.0, 0.0)
        assert glued.energy <= glued.bound <= glued.resistance_bound * (1 + 1e-9)


# =============================================================================
# Export
# =============================================================================

class TestExport:
    """Tests for mesh and solution dumps."""

    def test_mesh_json(self, octa):
        dump = mesh_json(build_mesh(octa, 0, 1))
        assert dump["N"] == 2 and dump["refine"] == 1
        assert len(dump["triangles"]) == 32
        assert set(dump["markers"]) == {"interior", "A", "B", "neumann"}
        json.dumps(dump)

    def test_csv(self, octa, tmp_path):
        solution = solve_mixed_bvp(build_mesh(octa, 0, 1))
        path = solution_csv(tmp_path / "u.csv", solution)
        lines = path.read_text().splitlines()
        assert lines[0] == "node,x,y,u"
        assert len(lines) == solution.mesh.num_nodes + 1
        table = convergence_table(octa, 0, 2)
        lines = convergence_csv(tmp_path / "conv.csv", table).read_text().splitlines()
        assert len(lines) == 4


# =============================================================================
# Deep refinement (slow)
# =============================================================================

@pytest.mark.slow
class TestDeepRefinement:
    """Convergence of R_est on F_0 up to k = 6."""

    def test_monotone_convergence(self, octa):
        table = convergence_table(octa, 0, 6)
        assert [row.k for row in table.rows] == list(range(7))
        R = [row.R_est for row in table.rows]
        deltas = [row.delta for row in table.rows[1:]]
        assert all(b > a for a, b in zip(R, R[1:]))
        assert all(d > 0 for d in deltas)
        assert all(b < a for a, b in zip(deltas, deltas[1:]))

    @pytest.mark.parametrize("k", [4, 5, 6])
    def test_unit_square_stays_exact(self, k):
        assert solve_mixed_bvp(unit_square_mesh(k)).R_est == pytest.approx(1.0, abs=1e-12)
