"""
Result records.

Everything the library reports (resistances, inequality checks, estimates,
verification outcomes) is a pydantic model so it can be dumped to JSON
losslessly and read back.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

GraphKindName = Literal["G", "D"]


class _Record(BaseModel):
    # Infinite resistances (disconnected electrodes) survive a JSON round trip.
    model_config = ConfigDict(ser_json_inf_nan="constants")


class GraphStats(_Record):
    """Exact counts of a built graph."""

    kind: GraphKindName
    N: int
    level: int
    num_vertices: int
    num_edges: int
    degree_histogram: dict[int, int] = Field(default_factory=dict)
    components: int
    size_A: int
    size_B: int


class ResistanceResult(_Record):
    """Effective resistance of G_m or D_m between A_m and B_m."""

    kind: GraphKindName
    N: int
    m: int
    R: float
    energy: float
    flux_per_side: dict[int, float] = Field(default_factory=dict)
    connected: bool = True
    cached: bool = False
    solver: str = "direct"

    def same_values(self, other: "ResistanceResult") -> bool:
        """Compare everything except the cache marker."""
        return self.model_dump(exclude={"cached"}) == other.model_dump(exclude={"cached"})


class InequalityCheck(_Record):
    """One recorded inequality lhs <= rhs * (1 + slack)."""

    name: str
    n: int
    m: int
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    slack: float = 0.0
    passed: bool = False
    skipped: bool = False
    reason: Optional[str] = None


class FeketeInterval(_Record):
    """Bracket [lower, upper] for log(rho) obtained from R_n."""

    n: int
    lower: float
    upper: float

    @property
    def width(self) -> float:
        return self.upper - self.lower


class RhoEstimate(_Record):
    last_ratio: float
    regression_slope_exp: float
    ratios: list[float]


class DualityRow(_Record):
    m: int
    R_G: float
    R_D: float
    deviation: float


class DualityReport(_Record):
    N: int
    deviation: float
    rows: list[DualityRow]


class ConvergenceRow(_Record):
    """One refinement step of a FEM convergence study."""

    k: int
    nodes: int
    energy: float
    R_est: float
    delta: Optional[float] = None


class ConvergenceTable(_Record):
    N: int
    n: int
    rows: list[ConvergenceRow]
    aitken_estimate: Optional[float] = Field(
        default=None, description="Aitken extrapolation of R_est (an estimate, not a bound)"
    )


class CheckRecord(_Record):
    """Outcome of a single verification assertion."""

    suite: str
    N: int
    m: Optional[int] = None
    check: str
    value: float
    tolerance: float
    passed: bool

    def label(self) -> str:
        where = f"N={self.N}" if self.m is None else f"N={self.N}, m={self.m}"
        return f"{self.suite}: {self.check} ({where})"


class ScalingReport(_Record):
    """Everything gathered about the resistance scaling of one carpet."""

    N: int
    sequences: dict[str, list[float]] = Field(default_factory=dict)
    ratios: dict[str, list[float]] = Field(default_factory=dict)
    increasing: dict[str, bool] = Field(default_factory=dict)
    rho: dict[str, RhoEstimate] = Field(default_factory=dict)
    duality: Optional[DualityReport] = None
    fem: dict[int, float] = Field(default_factory=dict)
    fem_refine: Optional[int] = None
    sandwich: list[InequalityCheck] = Field(default_factory=list)
    glued: list[InequalityCheck] = Field(default_factory=list)
    fekete: list[FeketeInterval] = Field(default_factory=list)
    fekete_intersection: Optional[tuple[float, float]] = None
    flags: list[str] = Field(default_factory=list)
    complete: bool = True
