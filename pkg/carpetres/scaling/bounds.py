"""
Multiplicative bounds relating R_{m+n} to R_n and the graph resistances, and
the resulting brackets for log(rho).
"""

import math
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from carpetres.fem.gluing import corner_indices, glued_current_energy, glued_potential_energy
from carpetres.fem.mesh import DEFAULT_MAX_TRIANGLES, build_mesh
from carpetres.fem.sectors import SectorData, sector_analysis
from carpetres.fem.solver import solve_mixed_bvp
from carpetres.geometry.carpet import CarpetParams
from carpetres.graphs.builder import GraphKind, build_graph
from carpetres.models.records import FeketeInterval, InequalityCheck
from carpetres.network.conductance import SolverOptions
from carpetres.network.results import solve_graph
from carpetres.utils.logger import log


def lower_constant(N: int) -> float:
    return 9 / (44 * N)


def upper_constant(N: int) -> float:
    return 44 * N / 9


def _check(name: str, n: int, m: int, lhs: float, rhs: float, slack: float) -> InequalityCheck:
    return InequalityCheck(name=name, n=n, m=m, lhs=lhs, rhs=rhs, slack=slack,
                           passed=bool(lhs <= rhs * (1 + slack)))


def _skip(name: str, n: int, m: int, reason: str, slack: float) -> InequalityCheck:
    return InequalityCheck(name=name, n=n, m=m, slack=slack, skipped=True, reason=reason)


def sandwich_check(
    params: CarpetParams,
    fem: Mapping[int, float],
    R_D: Mapping[int, float],
    R_G: Mapping[int, float],
    slack: float = 0.05,
) -> list[InequalityCheck]:
    """
    Check, for every n >= 0 and m >= 1 with R_{m+n} available:

        (N/2) R_n R_m^D          <= R_{m+n} (1 + slack)
        R_{m+n}                  <= (11/9) N^2 R_n R_m^G (1 + slack)
        9/(44N) R_0^-1 R_n R_m   <= R_{m+n} (1 + slack)
        R_{m+n}                  <= 44N/9 R_0^-1 R_n R_m (1 + slack)

    fem maps n to the continuum R_n; R_D, R_G map m to graph resistances.
    Pairs with a missing level are recorded as skipped.
    """
    N = params.N
    records = [_skip("lower", 0, 0, "m >= 1 required", slack)]
    depth = max(fem, default=-1)
    R_0 = fem.get(0)
    for n in range(depth + 1):
        for m in range(1, depth - n + 1):
            total = fem.get(m + n)
            R_n = fem.get(n)
            if total is None or R_n is None:
                records.append(_skip("lower", n, m, "missing FEM level", slack))
                continue
            if m in R_D:
                records.append(_check("lower", n, m, N / 2 * R_n * R_D[m], total, slack))
            else:
                records.append(_skip("lower", n, m, f"missing R_{m}^D", slack))
            if m in R_G:
                records.append(_check("upper", n, m, total, 11 / 9 * N ** 2 * R_n * R_G[m], slack))
            else:
                records.append(_skip("upper", n, m, f"missing R_{m}^G", slack))
            R_m = fem.get(m)
            if R_0 is None or R_m is None:
                records.append(_skip("continuum", n, m, "missing R_0 or R_m", slack))
                continue
            product = R_n * R_m / R_0
            records.append(_check("continuum-lower", n, m, lower_constant(N) * product, total, slack))
            records.append(_check("continuum-upper", n, m, total, upper_constant(N) * product, slack))
    return records


@dataclass(frozen=True)
class GluedBounds:
    """Constructive bounds lower <= R_{m+n} <= upper from glued fields."""

    n: int
    m: int
    upper: float
    lower: float
    R_total: float
    sector: SectorData

    def checks(self, slack: float) -> list[InequalityCheck]:
        return [
            _check("glued-upper", self.n, self.m, self.R_total, self.upper, slack),
            _check("glued-lower", self.n, self.m, self.lower, self.R_total, slack),
        ]


def _cell_differences(values: np.ndarray, cell_vertices: np.ndarray) -> np.ndarray:
    """Per cell, value at each non-centre base vertex minus value at the centre."""
    return values[cell_vertices[:, 1:]] - values[cell_vertices[:, :1]]


def glued_bounds(params: CarpetParams, m: int, n: int, k: int,
                 options: Optional[SolverOptions] = None,
                 R_total: Optional[float] = None,
                 snap_tolerance: float = 1e-6,
                 max_triangles: int = DEFAULT_MAX_TRIANGLES) -> GluedBounds:
    """
    Glue sector fields of F_n into every m-cell of F_{m+n}.

    The current uses, in each cell, the fluxes of the optimal unit current of
    G_m on the cell's three pendant edges; the potential uses the optimal D_m
    potential at the cell's corners. Their summed energies bound R_{m+n} above
    and (inverted) below.
    """
    N = params.N
    sector = sector_analysis(solve_mixed_bvp(build_mesh(params, n, k, snap_tolerance, max_triangles), options))
    if R_total is None:
        R_total = solve_mixed_bvp(build_mesh(params, m + n, k, snap_tolerance, max_triangles), options).R_est

    g_solution = solve_graph(build_graph(params, m, GraphKind.G, tol=params.tolerance(m, snap_tolerance)), options)
    fluxes = g_solution.R * _cell_differences(g_solution.potential.values, g_solution.graph.cell_vertices)
    # Remove solver round-off from the zero-sum constraint.
    fluxes -= fluxes.mean(axis=1, keepdims=True)
    upper = math.fsum(glued_current_energy(N, sector, *row).energy for row in fluxes)

    d_solution = solve_graph(build_graph(params, m, GraphKind.D, tol=params.tolerance(m, snap_tolerance)), options)
    corners = corner_indices(N)
    z = _cell_differences(d_solution.potential.values, d_solution.graph.cell_vertices)
    potential_energy = math.fsum(
        glued_potential_energy(N, sector, dict(zip(corners, row))).energy for row in z
    )
    lower = 1.0 / potential_energy if potential_energy > 0 else 0.0
    log.debug(f"Glued bounds N={N} n={n} m={m}: {lower!r} <= {R_total!r} <= {upper!r}")
    return GluedBounds(n=n, m=m, upper=upper, lower=lower, R_total=R_total, sector=sector)


def fekete_intervals(params: CarpetParams, fem: Mapping[int, float]) -> list[FeketeInterval]:
    """
    [(1/n) log(c R_n), (1/n) log(C R_n)] for every n >= 1, with
    c = 9/(44N) R_0^-1 and C = 44N/9 R_0^-1.
    """
    if 0 not in fem:
        raise ValueError("Fekete intervals need R_0")
    R_0 = fem[0]
    c = lower_constant(params.N) / R_0
    C = upper_constant(params.N) / R_0
    return [
        FeketeInterval(n=n, lower=math.log(c * R_n) / n, upper=math.log(C * R_n) / n)
        for n, R_n in sorted(fem.items()) if n >= 1
    ]


def running_intersection(intervals: list[FeketeInterval]) -> Optional[tuple[float, float]]:
    """Intersection of all brackets, or None when it is empty."""
    if not intervals:
        return None
    lower = max(iv.lower for iv in intervals)
    upper = min(iv.upper for iv in intervals)
    if lower > upper:
        log.warning(f"Fekete brackets have empty intersection ({lower!r} > {upper!r})")
        return None
    return lower, upper


def fekete_report(params: CarpetParams, fem: Mapping[int, float]) -> tuple[list[FeketeInterval],
                                                                           Optional[tuple[float, float]]]:
    intervals = fekete_intervals(params, fem)
    return intervals, running_intersection(intervals)
