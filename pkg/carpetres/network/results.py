"""
Resistance results for the approximating graphs, with caching and CSV export.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from carpetres.geometry.carpet import CarpetParams
from carpetres.geometry.cells import DEFAULT_MAX_CELLS, BoundaryClass, side_class
from carpetres.graphs.builder import GraphApprox, GraphKind, build_graph
from carpetres.models.records import ResistanceResult
from carpetres.network.conductance import SolverOptions
from carpetres.network.current import CurrentAssignment, current_from_potential, side_flux
from carpetres.network.potential import PotentialVector, dirichlet_energy, solve_potential
from carpetres.utils.cache import ResultCache
from carpetres.utils.numfmt import write_csv


@dataclass(frozen=True, eq=False)
class GraphSolution:
    """Optimal 0/1 potential and unit-flux current of a graph approximation."""

    graph: GraphApprox
    potential: PotentialVector
    current: CurrentAssignment
    energy: float
    R: float


def solve_graph(graph: GraphApprox, options: Optional[SolverOptions] = None) -> GraphSolution:
    """Solve the 0/1 problem between the graph's A and B sets."""
    net = graph.to_network()
    u = solve_potential(net, graph.boundary_A, graph.boundary_B, 0.0, 1.0, options)
    energy = dirichlet_energy(net, u)
    R = 1.0 / energy if u.connected and energy > 0 else math.inf
    scale = R if math.isfinite(R) else 0.0
    return GraphSolution(graph, u, current_from_potential(net, u, scale=scale), energy, R)


def electrode_sides(params: CarpetParams) -> list[int]:
    return [k for k in range(params.num_cells_per_level)
            if side_class(params, k) is not BoundaryClass.OTHER]


def result_from_solution(solution: GraphSolution) -> ResistanceResult:
    graph = solution.graph
    flux = {k: side_flux(graph, solution.current, k) for k in electrode_sides(graph.params)}
    return ResistanceResult(
        kind=graph.kind.value,
        N=graph.N,
        m=graph.level,
        R=solution.R,
        energy=solution.energy,
        flux_per_side=flux,
        connected=solution.potential.connected,
        solver=solution.potential.solver,
    )


def resistance_cache_key(params: CarpetParams, m: int, kind: GraphKind, snap_tolerance: float,
                         options: SolverOptions) -> str:
    return ResultCache.key(
        what="graph-resistance",
        N=params.N,
        kind=kind.value,
        m=m,
        snap_tolerance=snap_tolerance,
        rtol=options.rtol,
        direct_max_unknowns=options.direct_max_unknowns,
        cg_iter_factor=options.cg_iter_factor,
    )


def resistance_result(
    params: CarpetParams,
    m: int,
    kind: GraphKind | str = GraphKind.G,
    options: Optional[SolverOptions] = None,
    cache: Optional[ResultCache] = None,
    snap_tolerance: float = 1e-6,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> ResistanceResult:
    """
    R, energy and per-side fluxes of G_m or D_m.

    A cache hit returns the stored record with ``cached`` set; everything else
    is identical to a fresh computation.
    """
    if m < 1:
        raise ValueError(f"graph resistances are defined for m >= 1, got {m}")
    kind = GraphKind(kind)
    options = options or SolverOptions()
    key = resistance_cache_key(params, m, kind, snap_tolerance, options)
    if cache is not None:
        payload = cache.get(key)
        if payload is not None:
            return ResistanceResult.model_validate(payload).model_copy(update={"cached": True})

    graph = build_graph(params, m, kind, tol=params.tolerance(m, snap_tolerance), max_cells=max_cells)
    result = result_from_solution(solve_graph(graph, options))
    if cache is not None:
        cache.put(key, result.model_dump(mode="json"))
    return result


def potentials_csv(path: Path, graph: GraphApprox, u: PotentialVector) -> Path:
    """CSV with columns vertex, x, y, u."""
    rows = ((i, x, y, value) for i, ((x, y), value) in enumerate(zip(graph.positions, u.values)))
    return write_csv(path, ["vertex", "x", "y", "u"], rows)


def currents_csv(path: Path, current: CurrentAssignment) -> Path:
    """CSV with columns i, j, I (current from i to j)."""
    rows = ((int(i), int(j), float(v)) for (i, j), v in zip(current.edges, current.values))
    return write_csv(path, ["i", "j", "I"], rows)

