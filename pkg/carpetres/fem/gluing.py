"""
Energies of currents and potentials glued from the sector fields of F_n.

A current on F_n with prescribed fluxes I_0, I_N, I_{3N-1} through L_0, L_N,
L_{3N-1} (and none elsewhere) is assembled from rotated copies of V and W;
its energy depends on the fluxes only through the coefficients beta_j.
Similarly a potential with prescribed corner data z_j is assembled from v and w.
"""

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from carpetres.errors import FluxSumError, InvalidBoundaryError
from carpetres.fem.sectors import SectorData

FLUX_SUM_TOL = 1e-12


def flux_sides(N: int) -> tuple[int, int, int]:
    return 0, N, 3 * N - 1


def corner_indices(N: int) -> tuple[int, ...]:
    """Indices j of the corners C_j that are vertices of D_0."""
    return 0, 1, N, N + 1, 3 * N - 1, 3 * N


def _check_flux_sum(I_0: float, I_N: float, I_3N1: float):
    total = I_0 + I_N + I_3N1
    scale = max(1.0, abs(I_0), abs(I_N), abs(I_3N1))
    if abs(total) > FLUX_SUM_TOL * scale:
        raise FluxSumError(f"fluxes must sum to zero, got {total!r}")


def beta_coefficients(N: int, I_0: float, I_N: float, I_3N1: float) -> np.ndarray:
    """
    The 4N coefficients beta_j of the W-part of the glued current.

    Raises:
        FluxSumError: I_0 + I_N + I_{3N-1} != 0.
    """
    _check_flux_sum(I_0, I_N, I_3N1)
    beta = np.empty(4 * N)
    beta[0] = I_N - I_3N1
    beta[1:N] = 2 * I_N - 2 * I_0
    beta[N] = I_3N1 - I_0
    beta[N + 1:3 * N - 1] = 2 * I_3N1 - 2 * I_N
    beta[3 * N - 1] = I_0 - I_N
    beta[3 * N:] = 2 * I_0 - 2 * I_3N1
    return beta


def beta_square_sum(N: int, I_0: float, I_N: float, I_3N1: float) -> float:
    """Closed form of sum_j beta_j^2."""
    return ((4 * N - 3) * (I_N - I_0) ** 2
            + (8 * N - 7) * (I_3N1 - I_N) ** 2
            + (4 * N + 1) * (I_0 - I_3N1) ** 2)


def beta_square_bound(N: int, I_0: float, I_N: float, I_3N1: float) -> float:
    """(22N-18) I_0^2 + (22N-19) I_N^2 + (22N-16) I_{3N-1}^2, an upper bound for sum beta^2."""
    return (22 * N - 18) * I_0 ** 2 + (22 * N - 19) * I_N ** 2 + (22 * N - 16) * I_3N1 ** 2


@dataclass(frozen=True)
class GluedEnergy:
    """A glued energy with the two upper bounds stated for it."""

    energy: float
    bound: float
    resistance_bound: float


def glued_current_energy(N: int, sector: SectorData, I_0: float, I_N: float,
                         I_3N1: float) -> GluedEnergy:
    """
    Energy of the glued current with fluxes I_0, I_N, I_{3N-1}:

        (N^2/4) E_V sum I^2 + (N^2/36) E_W sum beta^2

    bounded by (N^2/4) E_V sum I^2 + (N^2/18)(11N-8) E_W sum I^2 <= (11/9) N^2 R sum I^2.
    """
    beta = beta_coefficients(N, I_0, I_N, I_3N1)
    flux_sq = I_0 ** 2 + I_N ** 2 + I_3N1 ** 2
    v_part = N ** 2 / 4 * sector.E_V * flux_sq
    energy = v_part + N ** 2 / 36 * sector.E_W * math.fsum(beta * beta)
    bound = v_part + N ** 2 / 18 * (11 * N - 8) * sector.E_W * flux_sq
    return GluedEnergy(energy=energy, bound=bound,
                       resistance_bound=11 / 9 * N ** 2 * sector.R * flux_sq)


def _corner_vector(N: int, z: Mapping[int, float]) -> np.ndarray:
    allowed = set(corner_indices(N))
    extra = set(z) - allowed
    if extra:
        raise InvalidBoundaryError(f"corner data given at {sorted(extra)}, not vertices of D_0")
    values = np.zeros(4 * N)
    for j, value in z.items():
        values[j] = value
    return values


def glued_potential_energy(N: int, sector: SectorData, z: Mapping[int, float]) -> GluedEnergy:
    """
    Energy of the glued potential with corner data z_j = u(C_j) - u(0):

        (1/4) E_v sum_j (z_{j+1} + z_j)^2 + (1/4) E_w sum_j (z_{j+1} - z_j)^2

    bounded by (E_v + E_w) sum z^2, which equals (2/N) R^-1 sum z^2.
    """
    values = _corner_vector(N, z)
    following = np.roll(values, -1)
    energy = (0.25 * sector.E_v * math.fsum((following + values) ** 2)
              + 0.25 * sector.E_w * math.fsum((following - values) ** 2))
    z_sq = math.fsum(values * values)
    return GluedEnergy(energy=energy, bound=(sector.E_v + sector.E_w) * z_sq,
                       resistance_bound=2 / N / sector.R * z_sq)
