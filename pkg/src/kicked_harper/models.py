from enum import Enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Any

import numpy as np


class ResponseFormat(str, Enum):
    MARKDOWN = "markdown"
    JSON = "json"


class Symmetry(str, Enum):
    S1 = "S1"
    S2 = "S2"
    S = "S"
    D = "D"
    R = "R"
    T1 = "T1"
    T2 = "T2"


class FixedPointKind(str, Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    NON_ELEMENTARY = "non_elementary"


class Shape(str, Enum):
    ORIGIN = "origin"
    HORIZONTAL_SEGMENT = "horizontal_segment"
    VERTICAL_SEGMENT = "vertical_segment"
    FULL_DIM = "full_dim"


class Verdict(str, Enum):
    N_DETECTED = "NDetected"
    E_PRESUMED = "EPresumed"


class ModeLock(str, Enum):
    SQUARE11 = "square11"
    DIAMOND_HALF = "diamond_half"


@dataclass(frozen=True)
class Params:
    """A member (alpha, beta) of the kicked Harper family."""

    alpha: float
    beta: float

    @property
    def on_diagonal(self) -> bool:
        return self.alpha == self.beta

    @property
    def below_diagonal(self) -> bool:
        return self.beta < self.alpha

    @property
    def above_diagonal(self) -> bool:
        return self.beta > self.alpha


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def __add__(self, other: "PlanePoint") -> "PlanePoint":
        return PlanePoint(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "PlanePoint") -> "PlanePoint":
        return PlanePoint(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "PlanePoint":
        return PlanePoint(-self.x, -self.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class Budget:
    """Per-pixel orbit budget: how many seeds and how many iterations each."""

    n_seeds: int = 32
    n_iters: int = 100_000

    @property
    def total(self) -> int:
        return self.n_seeds * self.n_iters


@dataclass(frozen=True)
class Jacobian2:
    a11: float
    a12: float
    a21: float
    a22: float

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def trace(self) -> float:
        return self.a11 + self.a22

    def as_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])


@dataclass(frozen=True)
class FixedPointReport:
    location: PlanePoint
    eigenvalues: tuple[complex, complex]
    eigenvectors: tuple[tuple[float, float], ...]
    classification: FixedPointKind


@dataclass(frozen=True)
class OrbitStats:
    n_iters: int
    dx_max: float
    dy_max: float
    birkhoff: tuple[float, float]
    seed: PlanePoint


@dataclass(frozen=True)
class RationalRotation:
    """F^period(witness) = witness + displacement, i.e. rotation displacement/period."""

    displacement: tuple[int, int]
    period: int
    witness: PlanePoint

    @property
    def vector(self) -> tuple[Fraction, Fraction]:
        return (
            Fraction(self.displacement[0], self.period),
            Fraction(self.displacement[1], self.period),
        )

    def as_floats(self) -> tuple[float, float]:
        vx, vy = self.vector
        return float(vx), float(vy)


@dataclass(frozen=True)
class ConvexPolygon:
    """Vertices in counterclockwise order. One vertex is a point, two a segment."""

    vertices: tuple[tuple[float, float], ...]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float).reshape(-1, 2)

    def to_json(self) -> list:
        return [[float(x), float(y)] for x, y in self.vertices]

    @classmethod
    def from_json(cls, data: list) -> "ConvexPolygon":
        return cls(tuple((float(x), float(y)) for x, y in data))


@dataclass(frozen=True)
class PixelVerdict:
    params: Params
    verdict: Verdict
    dx_max: float
    dy_max: float
    iterations_used: int
    seeds_used: int
    # seeds whose orbits first crossed the horizontal / vertical threshold
    witness_x: Optional[PlanePoint] = None
    witness_y: Optional[PlanePoint] = None

    @property
    def detected(self) -> bool:
        return self.verdict is Verdict.N_DETECTED


@dataclass(frozen=True)
class ScanGrid:
    alpha_range: tuple[float, float]
    beta_range: tuple[float, float]
    resolution: tuple[int, int]
    verdicts: tuple[PixelVerdict, ...]
    map_tag: str = "harper"

    def __post_init__(self):
        nx, ny = self.resolution
        if len(self.verdicts) != nx * ny:
            raise ValueError(f"expected {nx * ny} verdicts, got {len(self.verdicts)}")

    def at(self, i: int, j: int) -> PixelVerdict:
        """Pixel in column i (alpha) and row j (beta), row 0 at beta_range[0]."""
        return self.verdicts[j * self.resolution[0] + i]

    def detected_mask(self) -> np.ndarray:
        nx, ny = self.resolution
        return np.array([v.detected for v in self.verdicts], dtype=bool).reshape(ny, nx)

    def counts(self) -> dict:
        n = sum(v.detected for v in self.verdicts)
        return {"NDetected": n, "EPresumed": len(self.verdicts) - n}


@dataclass(frozen=True)
class BetaThresholds:
    alpha: float
    beta_minus_upper: float
    budget: int
    steps: tuple[tuple[float, str], ...] = ()


@dataclass(frozen=True)
class CertBound:
    grid_max: float
    grid_step: float
    lipschitz: float
    rigorous_bound: float
    target: float
    verdict: bool


@dataclass(frozen=True)
class HalfPlaneCertificate:
    params: Params
    v: tuple[float, float]
    u: tuple[int, int]
    c: float
    power: int
    bound: CertBound

    @property
    def rotation_bound(self) -> float:
        """Upper bound on <w, v> over the rotation set of F itself."""
        return (self.u[0] * self.v[0] + self.u[1] * self.v[1]) / self.power


@dataclass(frozen=True)
class NontwistParams:
    a: float
    b: float


@dataclass(frozen=True)
class FlowSpec:
    lam: float
    alpha: float

    @property
    def n_alpha(self) -> int:
        if self.alpha <= 0:
            return 0
        n = int(np.floor(1.0 / self.alpha))
        if (n + 1) * self.alpha <= 1.0:
            n += 1
        while n * self.alpha > 1.0:
            n -= 1
        return n


@dataclass(frozen=True)
class ConvergenceReport:
    deltas: tuple[float, ...]
    sup_errors_c0: tuple[float, ...]
    sup_errors_c1: tuple[float, ...]
    fitted_order: float
    fitted_order_c1: float


@dataclass
class RunReport:
    command: str
    config: dict
    config_hash: str
    result: Any
    exit_code: int = 0
    files: list = field(default_factory=list)

    def format_output(self) -> str:
        lines = [
            f"kicked_harper {self.command}",
            "",
            f"  Config hash: {self.config_hash}",
            f"  Config:      {', '.join(f'{k}={v}' for k, v in self.config.items())}",
        ]
        if self.files:
            lines.append(f"  Files:       {', '.join(self.files)}")
        if self.result is not None:
            import json
            body_str = json.dumps(self.result, indent=4)
            lines.append("  Result:")
            for line in body_str.split("\n"):
                lines.append(f"    {line}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "config_hash": self.config_hash,
            "result": self.result,
        }
