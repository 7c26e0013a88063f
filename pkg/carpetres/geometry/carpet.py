"""
Carpet parameters and the similarity maps of the 4N-carpet.

Points are float64 arrays with a trailing axis of length 2. Vertex and map
indices are always reduced modulo 4N.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from carpetres.errors import InvalidBoundaryError


def contraction_ratio(N: int) -> float:
    """r(N) = 1 / (1 + cot(pi / 4N)); N = 1 (the square) is excluded."""
    if int(N) != N or N < 2:
        raise InvalidBoundaryError(f"N must be an integer >= 2, got {N}")
    return 1.0 / (1.0 + 1.0 / math.tan(math.pi / (4 * N)))


def hausdorff_dimension(N: int) -> float:
    """d_f = log(4N) / log(1 + cot(pi / 4N))."""
    return math.log(4 * N) / -math.log(contraction_ratio(N))


@dataclass(frozen=True, eq=False)
class AffineMap:
    """
    A planar affine map x -> matrix @ x + offset.

    Every map used here is a similarity; ``ratio`` and ``preserves_orientation``
    report its scale factor and whether it includes a reflection.
    """

    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float).reshape(2, 2)
        offset = np.asarray(self.offset, dtype=float).reshape(2)
        matrix.setflags(write=False)
        offset.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "offset", offset)

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(np.eye(2), np.zeros(2))

    @classmethod
    def rotation(cls, angle: float) -> "AffineMap":
        c, s = math.cos(angle), math.sin(angle)
        return cls(np.array([[c, -s], [s, c]]), np.zeros(2))

    @classmethod
    def conjugation(cls) -> "AffineMap":
        return cls(np.diag([1.0, -1.0]), np.zeros(2))

    @classmethod
    def homothety(cls, ratio: float, center) -> "AffineMap":
        center = np.asarray(center, dtype=float)
        return cls(ratio * np.eye(2), (1.0 - ratio) * center)

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ self.matrix.T + self.offset

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """Return self ∘ inner."""
        return AffineMap(self.matrix @ inner.matrix, self.matrix @ inner.offset + self.offset)

    @property
    def ratio(self) -> float:
        return math.sqrt(abs(np.linalg.det(self.matrix)))

    @property
    def preserves_orientation(self) -> bool:
        return bool(np.linalg.det(self.matrix) > 0)


@dataclass(frozen=True, eq=False)
class CarpetParams:
    """
    The data every construction starts from: N, r(N) and the outer vertices C_j.

    Usage:
        params = CarpetParams.from_n(2)
        params.vertex(0)      # C_0 = (cos(pi/8), -sin(pi/8))
    """

    N: int
    r: float
    vertices: np.ndarray

    @classmethod
    def from_n(cls, N: int) -> "CarpetParams":
        r = contraction_ratio(N)
        j = np.arange(4 * N)
        angles = (2 * j - 1) * math.pi / (4 * N)
        vertices = np.column_stack([np.cos(angles), np.sin(angles)])
        vertices.setflags(write=False)
        return cls(N=N, r=r, vertices=vertices)

    @property
    def num_cells_per_level(self) -> int:
        return 4 * self.N

    @property
    def alpha(self) -> float:
        """Rotation angle of theta, pi / 2N."""
        return math.pi / (2 * self.N)

    @cached_property
    def side_length(self) -> float:
        """|L_j| = 2 sin(pi / 4N)."""
        return 2.0 * math.sin(math.pi / (4 * self.N))

    @cached_property
    def apothem(self) -> float:
        """Distance from the origin to each side L_j."""
        return math.cos(math.pi / (4 * self.N))

    @cached_property
    def side_normals(self) -> np.ndarray:
        """Outward unit normal of L_j; the normal of L_j points at angle j * pi / 2N."""
        angles = np.arange(4 * self.N) * self.alpha
        return np.column_stack([np.cos(angles), np.sin(angles)])

    def index(self, j: int) -> int:
        return int(j) % (4 * self.N)

    def vertex(self, j: int) -> np.ndarray:
        return self.vertices[self.index(j)]

    def side(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        """Endpoints of L_j, from C_j to C_{j+1}."""
        return self.vertex(j), self.vertex(j + 1)

    def side_midpoint(self, j: int) -> np.ndarray:
        a, b = self.side(j)
        return 0.5 * (a + b)

    def polygon(self) -> np.ndarray:
        """F_0 as its (4N, 2) vertex ring."""
        return np.array(self.vertices)

    def area(self) -> float:
        """Area of the regular 4N-gon F_0 of circumradius 1."""
        return 2 * self.N * math.sin(2 * math.pi / (4 * self.N))

    def tolerance(self, level: int, base: float = 1e-6) -> float:
        """Scale-relative point tolerance tau_m = base * r**m."""
        return base * self.r ** level


def outer_vertex(params: CarpetParams, j: int) -> np.ndarray:
    """C_{j mod 4N}."""
    return params.vertex(j).copy()


# --- the maps ----------------------------------------------------------------

def phi_map(params: CarpetParams, j: int) -> AffineMap:
    """phi_j(x) = r (x - C_j) + C_j."""
    return AffineMap.homothety(params.r, params.vertex(j))


def theta_map(params: CarpetParams, k: int = 1) -> AffineMap:
    """theta^k, rotation by k * pi / 2N (k taken mod 4N)."""
    return AffineMap.rotation((int(k) % (4 * params.N)) * params.alpha)


def _phi_theta(params: CarpetParams, j: int, power: int, conjugate: bool) -> AffineMap:
    inner = theta_map(params, power)
    if conjugate:
        inner = inner.compose(AffineMap.conjugation())
    return phi_map(params, j).compose(inner)


def psi_map(params: CarpetParams, j: int) -> AffineMap:
    """psi_j = phi_j ∘ theta^j for even j, phi_j ∘ theta^(j-1) ∘ conj for odd j."""
    j = params.index(j)
    if j % 2 == 0:
        return _phi_theta(params, j, j, conjugate=False)
    return _phi_theta(params, j, j - 1, conjugate=True)


def psi_tilde_map(params: CarpetParams, j: int) -> AffineMap:
    """
    psi~_j: equal to psi_j except on one pair of indices, which depends on the parity of N.

    N even: psi~_{3N-1} = phi ∘ theta^(3N-1), psi~_{3N} = phi ∘ theta^(3N-1) ∘ conj.
    N odd:  psi~_N = phi ∘ theta^N,           psi~_{N+1} = phi ∘ theta^N ∘ conj.
    """
    N = params.N
    j = params.index(j)
    first = 3 * N - 1 if N % 2 == 0 else N
    if j == first:
        return _phi_theta(params, j, first, conjugate=False)
    if j == first + 1:
        return _phi_theta(params, j, first, conjugate=True)
    return psi_map(params, j)


def apply_phi(params: CarpetParams, j: int, z) -> np.ndarray:
    return phi_map(params, j)(z)


def apply_theta(params: CarpetParams, k: int, z) -> np.ndarray:
    return theta_map(params, k)(z)


def apply_conj(z) -> np.ndarray:
    return AffineMap.conjugation()(z)


def apply_psi(params: CarpetParams, j: int, z) -> np.ndarray:
    return psi_map(params, j)(z)


def apply_psi_tilde(params: CarpetParams, j: int, z) -> np.ndarray:
    return psi_tilde_map(params, j)(z)
