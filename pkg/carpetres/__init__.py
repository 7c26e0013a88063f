"""
carpetres - resistance scaling of 4N-carpets.

Builds the pre-carpets F_n and their approximating graphs, computes graph and
finite element resistances, and checks the scaling bounds that determine rho(N).
"""

__version__ = "0.1.0"
__author__ = "carpetres contributors"

from carpetres.geometry import CarpetParams, contraction_ratio, hausdorff_dimension
from carpetres.graphs import GraphKind, build_graph
from carpetres.network import effective_resistance, solve_potential
from carpetres.models import RunConfig

__all__ = [
    "__version__",
    "CarpetParams",
    "contraction_ratio",
    "hausdorff_dimension",
    "GraphKind",
    "build_graph",
    "effective_resistance",
    "solve_potential",
    "RunConfig",
]
