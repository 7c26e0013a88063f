"""File dumps of meshes, solutions and convergence tables."""

from pathlib import Path

from carpetres.fem.mesh import Mesh
from carpetres.fem.solver import FemSolution
from carpetres.models.records import ConvergenceTable
from carpetres.utils.numfmt import write_csv

MARKER_NAMES = {0: "interior", 1: "A", 2: "B", 3: "neumann"}


def mesh_json(mesh: Mesh) -> dict:
    """{N, level, refine, nodes: [[x, y]], triangles: [[i, j, k]], markers: [...]}."""
    return {
        "N": mesh.params.N if mesh.params is not None else None,
        "level": mesh.level,
        "refine": mesh.refine,
        "nodes": mesh.nodes.tolist(),
        "triangles": mesh.triangles.tolist(),
        "markers": [MARKER_NAMES[int(m)] for m in mesh.markers],
    }


def solution_csv(path: Path, solution: FemSolution) -> Path:
    rows = ((i, x, y, u) for i, ((x, y), u) in enumerate(zip(solution.mesh.nodes, solution.values)))
    return write_csv(path, ["node", "x", "y", "u"], rows)


def convergence_csv(path: Path, table: ConvergenceTable) -> Path:
    rows = ((r.k, r.nodes, r.energy, r.R_est, "" if r.delta is None else r.delta) for r in table.rows)
    return write_csv(path, ["k", "nodes", "energy", "R_est", "delta"], rows)
