"""
Geometry of the 4N-carpet: parameters, similarity maps, cells and electrodes.
"""

from carpetres.geometry.carpet import (
    AffineMap,
    CarpetParams,
    apply_conj,
    apply_phi,
    apply_psi,
    apply_psi_tilde,
    apply_theta,
    contraction_ratio,
    hausdorff_dimension,
    outer_vertex,
    phi_map,
    psi_map,
    psi_tilde_map,
    theta_map,
)
from carpetres.geometry.cells import (
    BoundaryClass,
    CellAddress,
    SideSegment,
    boundary_segments,
    cell_maps,
    cell_polygons,
    cells_json,
    classify_points,
    enumerate_cells,
    phi_cell_offsets,
    polygon_area,
    shared_side,
    side_class,
)
from carpetres.geometry.svg import emit_carpet_svg

__all__ = [
    "AffineMap",
    "CarpetParams",
    "apply_conj",
    "apply_phi",
    "apply_psi",
    "apply_psi_tilde",
    "apply_theta",
    "contraction_ratio",
    "hausdorff_dimension",
    "outer_vertex",
    "phi_map",
    "psi_map",
    "psi_tilde_map",
    "theta_map",
    "BoundaryClass",
    "CellAddress",
    "SideSegment",
    "boundary_segments",
    "cell_maps",
    "cell_polygons",
    "cells_json",
    "classify_points",
    "enumerate_cells",
    "phi_cell_offsets",
    "polygon_area",
    "shared_side",
    "side_class",
    "emit_carpet_svg",
]
