"""
Run configuration shared by the CLI commands.

Built from the environment-driven Config singleton, optionally overlaid by a
config file and then by command-line flags. The config file is dotenv-style
KEY=VALUE text; floats are written with repr so a save/load round trip is exact.
"""

import io
from pathlib import Path
from typing import Any, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, Field, field_validator

from carpetres.config import Config, get_config
from carpetres.network.conductance import SolverOptions
from carpetres.utils.cache import ResultCache

OUTPUT_FORMATS = ("json", "csv", "svg")


class RunConfig(BaseModel):
    """Everything a command needs to know besides its own arguments."""

    N: int = Field(default=2, ge=2, description="Carpet parameter (4N-gon)")
    m_max: int = Field(default=4, ge=1, description="Largest graph level")
    n_max: int = Field(default=2, ge=0, description="Largest FEM pre-carpet level")
    k_max: int = Field(default=4, ge=0, description="FEM refinement depth")
    solver_rtol: float = Field(default=1e-12, gt=0, lt=1)
    direct_max_unknowns: int = Field(default=200_000, ge=1)
    cg_iter_factor: int = Field(default=50, ge=1)
    snap_tolerance: float = Field(default=1e-6, gt=0, lt=1, description="Snap tolerance multiplier of r^m")
    slack: float = Field(default=0.05, gt=0, lt=1, description="FEM discretisation slack")
    max_cells: int = Field(default=4_000_000, ge=1)
    max_triangles: int = Field(default=4_000_000, ge=1)
    workers: int = Field(default=1, ge=1)
    output_dir: Path = Path("./carpet_out")
    cache_dir: Path = Path("./.carpetres_cache")
    cache_enabled: bool = True
    formats: list[str] = Field(default_factory=lambda: list(OUTPUT_FORMATS))

    @field_validator("formats", mode="before")
    @classmethod
    def _split_formats(cls, value: Any) -> Any:
        if isinstance(value, str):
            value = [part.strip() for part in value.split(",") if part.strip()]
        return value

    @field_validator("formats")
    @classmethod
    def _known_formats(cls, value: list[str]) -> list[str]:
        unknown = [v for v in value if v not in OUTPUT_FORMATS]
        if unknown:
            raise ValueError(f"unknown output formats {unknown}; choose from {OUTPUT_FORMATS}")
        return value

    @classmethod
    def from_config(cls, config: Optional[Config] = None) -> "RunConfig":
        config = config or get_config()
        return cls(
            m_max=config.scaling.m_max,
            n_max=config.scaling.n_max,
            k_max=config.fem.refine,
            solver_rtol=config.solver.rtol,
            direct_max_unknowns=config.solver.direct_max_unknowns,
            cg_iter_factor=config.solver.cg_iter_factor,
            snap_tolerance=config.geometry.snap_tolerance,
            slack=config.scaling.slack,
            max_cells=config.geometry.max_cells,
            max_triangles=config.fem.max_triangles,
            workers=config.scaling.workers,
            output_dir=config.paths.output_dir,
            cache_dir=config.paths.cache_dir,
            cache_enabled=config.paths.cache_enabled,
        )

    def overlay(self, **overrides: Any) -> "RunConfig":
        """A validated copy with every non-None override applied."""
        updates = {key: value for key, value in overrides.items() if value is not None}
        return RunConfig.model_validate({**self.model_dump(), **updates})

    # --- config file -----------------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for name, value in self.model_dump().items():
            if isinstance(value, float):
                text = repr(value)
            elif isinstance(value, bool):
                text = "true" if value else "false"
            elif isinstance(value, list):
                text = ",".join(value)
            else:
                text = str(value)
            lines.append(f"{name.upper()}={text}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, base: Optional["RunConfig"] = None) -> "RunConfig":
        """Parse KEY=VALUE text; keys are field names in any case, unknown keys are rejected."""
        raw = dotenv_values(stream=io.StringIO(text))
        fields = {name.lower(): name for name in cls.model_fields}
        values = {}
        for key, value in raw.items():
            name = fields.get(key.lower())
            if name is None:
                raise ValueError(f"unknown config key: {key}")
            if value is not None:
                values[name] = value
        base = base or cls()
        return base.overlay(**values)

    def save(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_text(), encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: Path, base: Optional["RunConfig"] = None) -> "RunConfig":
        return cls.from_text(Path(path).read_text(encoding="utf-8"), base)

    # --- derived helpers ---------------------------------------------------------

    def solver_options(self) -> SolverOptions:
        return SolverOptions(self.solver_rtol, self.direct_max_unknowns, self.cg_iter_factor)

    def result_cache(self) -> ResultCache:
        return ResultCache(self.cache_dir, enabled=self.cache_enabled)
