"""
Resistance sequences, duality, sandwich bounds and estimates of the scaling factor rho(N).
"""

from carpetres.scaling.bounds import (
    GluedBounds,
    fekete_intervals,
    fekete_report,
    glued_bounds,
    running_intersection,
    sandwich_check,
)
from carpetres.scaling.report import build_report, report_passed, write_report
from carpetres.scaling.sequences import (
    duality_check,
    duality_from_sequences,
    fem_resistances,
    resistance_sequence,
    rho_estimate,
    successive_ratios,
)

__all__ = [
    "GluedBounds",
    "fekete_intervals",
    "fekete_report",
    "glued_bounds",
    "running_intersection",
    "sandwich_check",
    "build_report",
    "report_passed",
    "write_report",
    "duality_check",
    "duality_from_sequences",
    "fem_resistances",
    "resistance_sequence",
    "rho_estimate",
    "successive_ratios",
]
