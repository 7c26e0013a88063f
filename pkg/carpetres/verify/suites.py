"""
Verification suites.

Each suite takes a RunConfig and returns CheckRecords; the CLI prints them
and exits non-zero when any has failed.
"""

import math
from typing import Callable, Optional

import numpy as np

from carpetres.fem.gluing import beta_coefficients, beta_square_bound, beta_square_sum
from carpetres.fem.mesh import build_mesh
from carpetres.fem.sectors import sector_analysis
from carpetres.fem.solver import solve_mixed_bvp
from carpetres.geometry.carpet import CarpetParams
from carpetres.geometry.cells import BoundaryClass, side_class
from carpetres.graphs.builder import GraphKind, build_graph
from carpetres.graphs.symmetry import Symmetry, symmetry_permutation
from carpetres.models.records import CheckRecord
from carpetres.models.run_config import RunConfig
from carpetres.network.current import current_energy, kirchhoff_residual, side_flux, signed_potential
from carpetres.network.results import electrode_sides, solve_graph
from carpetres.scaling.bounds import glued_bounds, sandwich_check
from carpetres.scaling.sequences import duality_check, fem_resistances, resistance_sequence
from carpetres.utils.cache import ResultCache

SuiteFunction = Callable[[RunConfig, Optional[ResultCache]], list[CheckRecord]]

EXACT_TOL = 1e-9
BETA_SAMPLES = 10_000
SYMMETRY_MAX_LEVEL = 3


def _record(suite: str, N: int, m: Optional[int], check: str, value: float,
            tolerance: float) -> CheckRecord:
    return CheckRecord(suite=suite, N=N, m=m, check=check, value=value, tolerance=tolerance,
                       passed=bool(value <= tolerance))


def _params(config: RunConfig) -> CarpetParams:
    return CarpetParams.from_n(config.N)


def _graph(params: CarpetParams, m: int, kind: GraphKind, config: RunConfig):
    return build_graph(params, m, kind, tol=params.tolerance(m, config.snap_tolerance),
                       max_cells=config.max_cells)


def duality_suite(config: RunConfig, cache: Optional[ResultCache] = None) -> list[CheckRecord]:
    """R_m^G = 2 R_m^D for m = 1..m_max."""
    report = duality_check(_params(config), config.m_max, config.solver_options(), cache,
                           config.workers, config.snap_tolerance)
    return [_record("duality", config.N, row.m, "R_G/(2 R_D) - 1", row.deviation, EXACT_TOL)
            for row in report.rows]


def thomson_suite(config: RunConfig, cache: Optional[ResultCache] = None) -> list[CheckRecord]:
    """Current energy equals R, Kirchhoff's law holds, and every electrode side carries 1/N."""
    params = _params(config)
    records = []
    for kind in (GraphKind.G, GraphKind.D):
        for m in range(1, config.m_max + 1):
            sol = solve_graph(_graph(params, m, kind, config), config.solver_options())
            net = sol.graph.to_network()
            label = f"{kind.value}: "
            energy = current_energy(net, sol.current)
            records.append(_record("thomson", config.N, m, label + "|E(I)/R - 1|",
                                   abs(energy / sol.R - 1.0), EXACT_TOL))
            scale = float(np.abs(sol.current.values).max())
            residual = kirchhoff_residual(net, sol.current, sol.graph.boundary_A, sol.graph.boundary_B)
            records.append(_record("thomson", config.N, m, label + "Kirchhoff residual / max|I|",
                                   residual / scale, 1e-10))
            worst = 0.0
            for k in electrode_sides(params):
                target = -1.0 / params.N if side_class(params, k) is BoundaryClass.A else 1.0 / params.N
                worst = max(worst, abs(side_flux(sol.graph, sol.current, k) - target))
            records.append(_record("thomson", config.N, m, label + "max |side flux -/+ 1/N|",
                                   worst, EXACT_TOL))
    return records


def symmetry_suite(config: RunConfig, cache: Optional[ResultCache] = None) -> list[CheckRecord]:
    """u o theta^2 = -u and u o conj = u for the optimal signed potentials."""
    params = _params(config)
    records = []
    for kind in (GraphKind.G, GraphKind.D):
        for m in range(1, min(config.m_max, SYMMETRY_MAX_LEVEL) + 1):
            sol = solve_graph(_graph(params, m, kind, config), config.solver_options())
            u = signed_potential(sol.potential)
            theta2 = symmetry_permutation(sol.graph, Symmetry.THETA2)
            conj = symmetry_permutation(sol.graph, Symmetry.CONJ)
            label = f"{kind.value}: "
            records.append(_record("symmetry", config.N, m, label + "max |u o theta^2 + u|",
                                   float(np.abs(theta2.pullback(u) + u).max()), EXACT_TOL))
            records.append(_record("symmetry", config.N, m, label + "max |u o conj - u|",
                                   float(np.abs(conj.pullback(u) - u).max()), EXACT_TOL))
            full_turn = theta2.power(2 * params.N)
            records.append(_record("symmetry", config.N, m, label + "theta^2 to the 2N moves vertices",
                                   float(np.count_nonzero(full_turn != np.arange(len(full_turn)))), 0.0))
    return records


def sector_suite(config: RunConfig, cache: Optional[ResultCache] = None) -> list[CheckRecord]:
    """Orthogonality of v and w, the energy identity, and the continuum symmetry residuals."""
    params = _params(config)
    records = []
    for n in range(0, min(config.n_max, 1) + 1):
        mesh = build_mesh(params, n, config.k_max, config.snap_tolerance, config.max_triangles)
        data = sector_analysis(solve_mixed_bvp(mesh, config.solver_options()))
        checks = [
            ("|a(v, w)| / sqrt(E_v E_w)", data.orthogonality_relative),
            ("|4/R - 2N(E_v + E_w)| / (4/R)", data.identity_residual),
            ("max |u_n o theta^2 + u_n|", data.theta2_residual),
            ("max |u_n o conj - u_n|", data.conj_residual),
        ]
        records.extend(_record("sector", config.N, n, name, value, EXACT_TOL) for name, value in checks)
    return records


def beta_suite(config: RunConfig, cache: Optional[ResultCache] = None) -> list[CheckRecord]:
    """Closed form and upper bound of sum beta^2 on random zero-sum fluxes."""
    N = config.N
    rng = np.random.default_rng(N)
    pairs = rng.standard_normal((BETA_SAMPLES, 2))
    worst_identity = 0.0
    worst_bound = -math.inf
    for I_0, I_N in pairs:
        I_3N1 = -(I_0 + I_N)
        beta = beta_coefficients(N, I_0, I_N, I_3N1)
        direct = math.fsum(beta * beta)
        closed = beta_square_sum(N, I_0, I_N, I_3N1)
        worst_identity = max(worst_identity, abs(direct - closed) / max(closed, 1e-300))
        worst_bound = max(worst_bound, direct - beta_square_bound(N, I_0, I_N, I_3N1))
    return [
        _record("beta", N, None, "sum beta^2 closed form (relative)", worst_identity, 1e-12),
        _record("beta", N, None, "max(sum beta^2 - bound)", worst_bound, 0.0),
    ]


def sandwich_suite(config: RunConfig, cache: Optional[ResultCache] = None) -> list[CheckRecord]:
    """Multiplicative bounds on R_{m+n}, from the constants and from glued fields."""
    params = _params(config)
    options = config.solver_options()
    depth = config.n_max
    fem = fem_resistances(params, depth, config.k_max, options, config.snap_tolerance,
                          config.max_triangles)
    m_top = max(1, depth)
    R_G = resistance_sequence(params, GraphKind.G, m_top, options, cache, config.workers, config.snap_tolerance)
    R_D = resistance_sequence(params, GraphKind.D, m_top, options, cache, config.workers, config.snap_tolerance)
    inequalities = sandwich_check(params, fem, dict(enumerate(R_D, start=1)),
                                  dict(enumerate(R_G, start=1)), config.slack)
    for total in range(1, depth + 1):
        for m in range(1, total + 1):
            bounds = glued_bounds(params, m, total - m, config.k_max, options, R_total=fem[total],
                                  snap_tolerance=config.snap_tolerance,
                                  max_triangles=config.max_triangles)
            inequalities.extend(bounds.checks(config.slack))
    return [
        CheckRecord(suite="sandwich", N=config.N, m=rec.m,
                    check=f"{rec.name} (n={rec.n}): lhs / rhs", value=rec.lhs / rec.rhs,
                    tolerance=1 + rec.slack, passed=rec.passed)
        for rec in inequalities if not rec.skipped
    ]


SUITE_REGISTRY: dict[str, dict] = {
    "duality": {
        "function": duality_suite,
        "description": "R_m^G = 2 R_m^D on the approximating graphs",
    },
    "thomson": {
        "function": thomson_suite,
        "description": "Optimal current energy, Kirchhoff law and side fluxes",
    },
    "symmetry": {
        "function": symmetry_suite,
        "description": "theta^2 antisymmetry and conjugation symmetry of graph potentials",
    },
    "sector": {
        "function": sector_suite,
        "description": "Sector orthogonality and energy identity on FEM meshes",
    },
    "beta": {
        "function": beta_suite,
        "description": "Closed form and bound for the gluing coefficients",
    },
    "sandwich": {
        "function": sandwich_suite,
        "description": "Multiplicative bounds relating R_{m+n}, R_n and R_m",
    },
}


def get_suite(name: str) -> SuiteFunction:
    """
    Look up a verification suite by name.

    Raises:
        ValueError: If no suite has that name
    """
    name = name.lower()
    if name not in SUITE_REGISTRY:
        available = ", ".join(SUITE_REGISTRY)
        raise ValueError(f"Unknown suite: {name}. Available: {available}")
    return SUITE_REGISTRY[name]["function"]


def run_suite(name: str, config: RunConfig, cache: Optional[ResultCache] = None) -> list[CheckRecord]:
    return get_suite(name)(config, cache)
