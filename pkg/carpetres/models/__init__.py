"""Data models for carpetres."""

from carpetres.models.records import (
    CheckRecord,
    ConvergenceRow,
    ConvergenceTable,
    DualityReport,
    DualityRow,
    FeketeInterval,
    GraphStats,
    InequalityCheck,
    ResistanceResult,
    RhoEstimate,
    ScalingReport,
)
from carpetres.models.run_config import RunConfig

__all__ = [
    "CheckRecord",
    "ConvergenceRow",
    "ConvergenceTable",
    "DualityReport",
    "DualityRow",
    "FeketeInterval",
    "GraphStats",
    "InequalityCheck",
    "ResistanceResult",
    "RhoEstimate",
    "ScalingReport",
    "RunConfig",
]
