"""
Exception hierarchy for carpetres.

All library errors derive from CarpetError so the CLI can report them
uniformly. Disconnected A/B sets are not an error: they produce an
infinite resistance instead.
"""

from typing import Any, Optional


class CarpetError(Exception):
    """Base class for all carpetres errors."""


class LevelCapExceeded(CarpetError, ValueError):
    """A requested level would exceed the configured size cap."""

    def __init__(self, what: str, requested: int, cap: int):
        self.what = what
        self.requested = requested
        self.cap = cap
        super().__init__(f"{what}: {requested} exceeds configured cap {cap}")


class GeometryToleranceError(CarpetError):
    """Point snapping merged points that are too far apart."""


class SymmetryViolation(CarpetError):
    """A symmetry of the carpet failed to map a structure onto itself."""


class InvalidBoundaryError(CarpetError, ValueError):
    """Boundary sets are empty, overlapping, or out of range."""


class FluxSumError(CarpetError, ValueError):
    """Prescribed side fluxes do not sum to zero."""


class MeshConstructionError(CarpetError):
    """A mesh failed a structural check (conformity, sector straddling)."""


class SolverError(CarpetError):
    """A linear solve failed or did not converge."""


class SequenceError(CarpetError):
    """A resistance sweep failed part way; `partial` holds the values computed so far."""

    def __init__(self, message: str, partial: Optional[list[Any]] = None):
        self.partial = list(partial or [])
        super().__init__(message)
