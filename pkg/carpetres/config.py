"""
Configuration management for carpetres.

Handles loading settings from environment variables and .env files.
Provides a central Config class that all modules can import.
"""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Load .env file from the working directory
load_dotenv()

ENV_PREFIX = "CARPETRES_"


def _env(name: str, default):
    return os.getenv(ENV_PREFIX + name, default)


@dataclass
class GeometryConfig:
    """Settings for carpet construction and point snapping."""

    # tau_m = snap_tolerance * r**m
    snap_tolerance: float = 1e-6
    max_cells: int = 4_000_000

    def __post_init__(self):
        self.snap_tolerance = float(_env("SNAP_TOLERANCE", self.snap_tolerance))
        self.max_cells = int(_env("MAX_CELLS", self.max_cells))


@dataclass
class SolverConfig:
    """Settings for the sparse linear solves."""

    rtol: float = 1e-12
    direct_max_unknowns: int = 200_000
    # CG iteration cap is cg_iter_factor * sqrt(unknowns)
    cg_iter_factor: int = 50

    def __post_init__(self):
        self.rtol = float(_env("SOLVER_RTOL", self.rtol))
        self.direct_max_unknowns = int(_env("DIRECT_MAX_UNKNOWNS", self.direct_max_unknowns))
        self.cg_iter_factor = int(_env("CG_ITER_FACTOR", self.cg_iter_factor))


@dataclass
class FemConfig:
    """Settings for the finite element module."""

    refine: int = 4
    max_triangles: int = 4_000_000

    def __post_init__(self):
        self.refine = int(_env("FEM_REFINE", self.refine))
        self.max_triangles = int(_env("FEM_MAX_TRIANGLES", self.max_triangles))


@dataclass
class ScalingConfig:
    """Settings for resistance sweeps and the scaling report."""

    m_max: int = 4
    n_max: int = 2
    slack: float = 0.05
    workers: int = 1

    def __post_init__(self):
        self.m_max = int(_env("M_MAX", self.m_max))
        self.n_max = int(_env("N_MAX", self.n_max))
        self.slack = float(_env("SLACK", self.slack))
        self.workers = int(_env("WORKERS", self.workers))


@dataclass
class PathsConfig:
    """Settings for file paths."""

    output_dir: Path = field(default_factory=lambda: Path("./carpet_out"))
    cache_dir: Path = field(default_factory=lambda: Path("./.carpetres_cache"))
    cache_enabled: bool = True

    def __post_init__(self):
        self.output_dir = Path(_env("OUTPUT_DIR", self.output_dir))
        self.cache_dir = Path(_env("CACHE_DIR", self.cache_dir))
        self.cache_enabled = str(_env("CACHE", "true")).lower() == "true"


@dataclass
class LoggingConfig:
    """Settings for logging."""

    level: str = "INFO"
    log_file: Optional[str] = None

    def __post_init__(self):
        self.level = str(_env("LOG_LEVEL", self.level)).upper()
        self.log_file = _env("LOG_FILE", None) or None


class Config:
    """
    Central configuration class for carpetres.

    Usage:
        from carpetres.config import get_config

        config = get_config()
        print(config.solver.rtol)        # 1e-12
        print(config.paths.cache_dir)    # .carpetres_cache
    """

    _instance: Optional["Config"] = None

    def __new__(cls):
        """Singleton pattern - only one Config instance."""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialize()
        return cls._instance

    def _initialize(self):
        """Initialize all configuration sections."""
        self.geometry = GeometryConfig()
        self.solver = SolverConfig()
        self.fem = FemConfig()
        self.scaling = ScalingConfig()
        self.paths = PathsConfig()
        self.logging = LoggingConfig()

    @classmethod
    def reset(cls) -> "Config":
        """Drop the singleton and re-read the environment."""
        cls._instance = None
        return cls()

    def validate(self) -> list[str]:
        """
        Validate configuration and return list of errors.

        Returns:
            List of error messages (empty if valid)
        """
        errors = []

        for name, value in [("SNAP_TOLERANCE", self.geometry.snap_tolerance),
                            ("SOLVER_RTOL", self.solver.rtol),
                            ("SLACK", self.scaling.slack)]:
            if not 0.0 < value < 1.0:
                errors.append(f"{ENV_PREFIX}{name} must lie in (0, 1), got {value}")

        for name, value in [("MAX_CELLS", self.geometry.max_cells),
                            ("DIRECT_MAX_UNKNOWNS", self.solver.direct_max_unknowns),
                            ("CG_ITER_FACTOR", self.solver.cg_iter_factor),
                            ("FEM_MAX_TRIANGLES", self.fem.max_triangles),
                            ("M_MAX", self.scaling.m_max),
                            ("WORKERS", self.scaling.workers)]:
            if value <= 0:
                errors.append(f"{ENV_PREFIX}{name} must be positive, got {value}")

        if self.fem.refine < 0 or self.scaling.n_max < 0:
            errors.append("FEM refinement and level caps must be non-negative")

        return errors

    def is_valid(self) -> bool:
        """Check if configuration is valid."""
        return len(self.validate()) == 0

    def print_status(self):
        """Print configuration status for debugging."""
        from rich.console import Console
        from rich.table import Table

        console = Console()

        table = Table(title="carpetres Configuration")
        table.add_column("Setting", style="cyan")
        table.add_column("Value", style="green")

        table.add_row("Snap tolerance", repr(self.geometry.snap_tolerance))
        table.add_row("Max cells", str(self.geometry.max_cells))
        table.add_row("Solver rtol", repr(self.solver.rtol))
        table.add_row("Direct solve up to", f"{self.solver.direct_max_unknowns} unknowns")
        table.add_row("FEM refinement", str(self.fem.refine))
        table.add_row("Graph m_max", str(self.scaling.m_max))
        table.add_row("FEM n_max", str(self.scaling.n_max))
        table.add_row("Slack", repr(self.scaling.slack))
        table.add_row("Output Dir", str(self.paths.output_dir))
        table.add_row("Cache Dir", f"{self.paths.cache_dir} ({'on' if self.paths.cache_enabled else 'off'})")

        console.print(table)

        errors = self.validate()
        if errors:
            console.print("\n[red]Configuration Errors:[/red]")
            for error in errors:
                console.print(f"  [red]• {error}[/red]")


def get_config() -> Config:
    """Get the singleton Config instance."""
    return Config()
