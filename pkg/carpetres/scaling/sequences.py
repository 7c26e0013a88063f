"""
Resistance sequences of the graph approximations and the continuum pre-carpets.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from carpetres.errors import CarpetError, SequenceError
from carpetres.fem.mesh import DEFAULT_MAX_TRIANGLES, build_mesh
from carpetres.fem.solver import solve_mixed_bvp
from carpetres.geometry.carpet import CarpetParams
from carpetres.geometry.cells import DEFAULT_MAX_CELLS
from carpetres.graphs.builder import GraphKind
from carpetres.models.records import DualityReport, DualityRow, RhoEstimate
from carpetres.network.conductance import SolverOptions
from carpetres.network.results import resistance_result
from carpetres.utils.cache import ResultCache
from carpetres.utils.logger import log


def resistance_sequence(
    params: CarpetParams,
    kind: GraphKind | str,
    m_max: int,
    options: Optional[SolverOptions] = None,
    cache: Optional[ResultCache] = None,
    workers: int = 1,
    snap_tolerance: float = 1e-6,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> list[float]:
    """
    [R_1, ..., R_{m_max}] for G_m or D_m.

    Levels are solved independently (on ``workers`` threads) and returned in order of m.

    Raises:
        SequenceError: some level failed; ``partial`` holds the values below the first failure.
    """
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    kind = GraphKind(kind)

    def solve(m: int) -> float:
        return resistance_result(params, m, kind, options, cache, snap_tolerance, max_cells).R

    levels = range(1, m_max + 1)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [pool.submit(solve, m) for m in levels]

    values: list[float] = []
    for m, future in zip(levels, futures):
        try:
            values.append(future.result())
        except CarpetError as e:
            raise SequenceError(f"{kind.value}_{m} failed for N={params.N}: {e}", values) from e
        log.debug(f"R_{m}^{kind.value}(N={params.N}) = {values[-1]!r}")
    return values


def duality_from_sequences(N: int, R_G: Sequence[float], R_D: Sequence[float]) -> DualityReport:
    rows = [
        DualityRow(m=m, R_G=g, R_D=d, deviation=abs(g / (2 * d) - 1.0))
        for m, (g, d) in enumerate(zip(R_G, R_D), start=1)
    ]
    deviation = max((row.deviation for row in rows), default=0.0)
    return DualityReport(N=N, deviation=deviation, rows=rows)


def duality_check(params: CarpetParams, m_max: int, options: Optional[SolverOptions] = None,
                  cache: Optional[ResultCache] = None, workers: int = 1,
                  snap_tolerance: float = 1e-6) -> DualityReport:
    """Largest relative deviation of R_m^G / (2 R_m^D) from 1 over m = 1..m_max."""
    R_G = resistance_sequence(params, GraphKind.G, m_max, options, cache, workers, snap_tolerance)
    R_D = resistance_sequence(params, GraphKind.D, m_max, options, cache, workers, snap_tolerance)
    return duality_from_sequences(params.N, R_G, R_D)


def successive_ratios(seq: Sequence[float]) -> list[float]:
    return [b / a for a, b in zip(seq, seq[1:])]


def rho_estimate(seq: Sequence[float]) -> RhoEstimate:
    """
    Two estimates of the growth factor of a resistance sequence: the last ratio
    and exp of the least-squares slope of log R_m against m.

    Raises:
        ValueError: fewer than two entries, or a non-positive or non-finite entry.
    """
    values = [float(x) for x in seq]
    if len(values) < 2:
        raise ValueError("rho_estimate needs at least two resistances")
    if not all(math.isfinite(x) and x > 0 for x in values):
        raise ValueError("resistances must be finite and positive")
    ratios = successive_ratios(values)
    slope = np.polyfit(np.arange(len(values), dtype=float), np.log(values), 1)[0]
    return RhoEstimate(last_ratio=ratios[-1], regression_slope_exp=float(math.exp(slope)),
                       ratios=ratios)


def ratio_differences_nonincreasing(ratios: Sequence[float], rel_tol: float = 1e-9) -> bool:
    diffs = [abs(b - a) for a, b in zip(ratios, ratios[1:])]
    return all(d2 <= d1 * (1 + rel_tol) + 1e-15 for d1, d2 in zip(diffs, diffs[1:]))


def fem_resistances(params: CarpetParams, n_max: int, k: int,
                    options: Optional[SolverOptions] = None,
                    snap_tolerance: float = 1e-6,
                    max_triangles: int = DEFAULT_MAX_TRIANGLES) -> dict[int, float]:
    """{n: R_n} for n = 0..n_max, every level at refinement depth k."""
    values = {}
    for n in range(n_max + 1):
        mesh = build_mesh(params, n, k, snap_tolerance, max_triangles)
        values[n] = solve_mixed_bvp(mesh, options).R_est
        log.debug(f"R_{n}(N={params.N}, k={k}) = {values[n]!r}")
    return values
