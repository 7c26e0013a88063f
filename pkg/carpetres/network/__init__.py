"""
Resistor networks: optimal potentials, effective resistance, currents and fluxes.
"""

from carpetres.network.conductance import ConductanceNetwork, SolverOptions, solve_dirichlet_system
from carpetres.network.current import (
    CurrentAssignment,
    current_energy,
    current_from_potential,
    kirchhoff_residual,
    side_flux,
    signed_potential,
)
from carpetres.network.potential import (
    PotentialVector,
    dirichlet_energy,
    effective_resistance,
    solve_potential,
)

__all__ = [
    "ConductanceNetwork",
    "SolverOptions",
    "solve_dirichlet_system",
    "CurrentAssignment",
    "current_energy",
    "current_from_potential",
    "kirchhoff_residual",
    "side_flux",
    "signed_potential",
    "PotentialVector",
    "dirichlet_energy",
    "effective_resistance",
    "solve_potential",
]
