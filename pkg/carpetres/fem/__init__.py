"""
Finite element resistances of the pre-carpets and the sector energy identities.
"""

from carpetres.fem.gluing import (
    GluedEnergy,
    beta_coefficients,
    beta_square_bound,
    beta_square_sum,
    corner_indices,
    glued_current_energy,
    glued_potential_energy,
)
from carpetres.fem.mesh import Mesh, build_mesh, node_permutation, refine_uniform, unit_square_mesh
from carpetres.fem.sectors import SectorData, sector_analysis
from carpetres.fem.solver import FemSolution, convergence_table, normalize_pm1, solve_mixed_bvp

__all__ = [
    "GluedEnergy",
    "beta_coefficients",
    "beta_square_bound",
    "beta_square_sum",
    "corner_indices",
    "glued_current_energy",
    "glued_potential_energy",
    "Mesh",
    "build_mesh",
    "node_permutation",
    "refine_uniform",
    "unit_square_mesh",
    "SectorData",
    "sector_analysis",
    "FemSolution",
    "convergence_table",
    "normalize_pm1",
    "solve_mixed_bvp",
]
