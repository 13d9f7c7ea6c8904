from typing import Optional, List, Literal, Tuple

from pydantic import BaseModel, Field, ConfigDict, model_validator

from kicked_harper.constants import DEFAULT_SEEDS, DEFAULT_ITERS, DEFAULT_ORBITS, DEFAULT_ORBIT_ITERS
from kicked_harper.models import ModeLock, ResponseFormat


class RunConfig(BaseModel):
    model_config = ConfigDict(str_strip_whitespace=True, extra="forbid")

    seed: int = Field(
        default=0,
        ge=0,
        lt=2**64,
        description="Master seed; every pseudo-random choice derives from it",
    )
    prefix: str = Field(
        default="harper",
        description="Output path prefix for written files",
        min_length=1,
    )
    threads: Optional[int] = Field(
        default=None,
        ge=1,
        description="Worker cap; falls back to HARPER_THREADS, then the CPU count",
    )
    format: ResponseFormat = Field(
        default=ResponseFormat.MARKDOWN,
        description="Output format for printed reports: 'markdown' or 'json'",
    )


class ScanInput(RunConfig):
    alpha: Tuple[float, float] = Field(..., description="Alpha range (lo, hi)")
    beta: Tuple[float, float] = Field(..., description="Beta range (lo, hi)")
    res: Tuple[int, int] = Field(default=(64, 64), description="Resolution (nx, ny)")
    iters: int = Field(default=DEFAULT_ITERS, ge=1, description="Iterations per seed")
    seeds: int = Field(default=DEFAULT_SEEDS, ge=1, description="Seeds per pixel")

    @model_validator(mode="after")
    def _ranges(self):
        for name, (lo, hi) in (("alpha", self.alpha), ("beta", self.beta)):
            if lo > hi:
                raise ValueError(f"{name} range {lo}:{hi} is empty")
        if min(self.res) < 1:
            raise ValueError(f"resolution must be positive, got {self.res}")
        return self


class RotsetInput(RunConfig):
    alpha: float = Field(..., description="Horizontal kick strength")
    beta: float = Field(..., description="Vertical kick strength")
    orbits: int = Field(default=DEFAULT_ORBITS, ge=1, description="Number of seed orbits")
    iters: int = Field(default=DEFAULT_ORBIT_ITERS, ge=100, description="Iterations per orbit")
    tol: float = Field(default=1e-3, gt=0, description="Width below which an axis counts as degenerate")


class ClassifyPixelInput(RunConfig):
    alpha: float = Field(..., description="Horizontal kick strength")
    beta: float = Field(..., description="Vertical kick strength")
    iters: int = Field(default=DEFAULT_ITERS, ge=1, le=10_000_000, description="Iterations per seed")
    seeds: int = Field(default=DEFAULT_SEEDS, ge=1, le=4096, description="Number of seeds")


class CertifyInput(RunConfig):
    which: Optional[ModeLock] = Field(
        default=None,
        description="Mode-locking check: 'square11' or 'diamond_half'",
    )
    alpha: float = Field(default=1.0, description="Alpha for a custom half-plane certificate")
    beta: float = Field(default=1.0, description="Beta for a custom half-plane certificate")
    v: Tuple[int, int] = Field(default=(0, 1), description="Integer normal of the line")
    u: Tuple[int, int] = Field(default=(0, 2), description="Integer translation")
    c: float = Field(default=0.125, description="Line offset <z, v> = c")
    power: int = Field(default=2, ge=1, le=64, description="Iterate F^power")
    step: float = Field(default=1e-6, gt=0, le=0.1, description="Grid step along the line")
    target: Optional[float] = Field(default=None, description="Override of the bound <u, v>")
    replay: Optional[str] = Field(default=None, description="Certificate JSON to recompute")


class BetaPlusInput(RunConfig):
    alphas: List[float] = Field(..., min_length=1, description="Alphas (each >= 1/2)")
    steps: int = Field(default=12, ge=0, le=60, description="Bisection steps")
    seeds: int = Field(default=16, ge=1, description="Seeds per classification")
    iters: int = Field(default=40_000, ge=1, description="Iterations per seed")
    ceiling: float = Field(default=1.0, gt=0, description="Bisection ceiling as a multiple of (8/pi)/sqrt(alpha)")

    @model_validator(mode="after")
    def _alphas(self):
        if min(self.alphas) < 0.5:
            raise ValueError("every alpha must be >= 1/2")
        return self


class EulerInput(RunConfig):
    lam: float = Field(default=0.5, ge=0, le=1, description="Ray slope lambda in [0, 1]")
    alphas: List[float] = Field(
        default=[0.02, 0.01, 0.005, 0.0025],
        min_length=3,
        description="Euler step sizes",
    )
    sample: int = Field(default=64, ge=1, description="Quasi-random start points")


class NontwistInput(RunConfig):
    action: Literal["convergence", "conjecture"] = Field(
        default="convergence",
        description="'convergence' for the rescaling distances, 'conjecture' for the rescaled strip scan",
    )
    alpha0: float = Field(default=0.3, ge=0, lt=1, description="Base alpha in [0, 1)")
    n_list: List[int] = Field(default=[4, 16, 64], min_length=1, description="Shifts n for the convergence run")
    n: int = Field(default=4, ge=1, description="Strip index for the conjecture run")
    res: Tuple[int, int] = Field(default=(32, 32), description="Resolution of both grids")
    iters: int = Field(default=20_000, ge=1, description="Iterations per seed")
    seeds: int = Field(default=8, ge=1, description="Seeds per pixel")


class FixedPointsInput(RunConfig):
    alpha: float = Field(..., description="Horizontal kick strength")
    beta: float = Field(..., description="Vertical kick strength")


class ExperimentInput(RunConfig):
    kind: Literal["cusp", "monotonicity", "continuity", "drift", "mean_rotation"] = Field(
        ..., description="Which no-target experiment to run"
    )
    lam: float = Field(default=0.2, ge=0, le=1, description="Ray slope for the cusp run")
    alphas: List[float] = Field(default=[0.02, 0.04, 0.06, 0.08, 0.1], min_length=1, description="Alphas (cusp) or diagonal values (monotonicity)")
    alpha: float = Field(default=1.0, description="Alpha for continuity / drift / mean rotation")
    beta: float = Field(default=1.0, description="Beta for continuity / drift / mean rotation")
    radius: float = Field(default=1e-3, ge=0, description="Perturbation radius for continuity")
    samples: int = Field(default=4, ge=1, description="Perturbed parameters for continuity")
    one_sided: bool = Field(default=False, description="Continuity: sample only toward larger |alpha| and |beta|")
    iters: int = Field(default=20_000, ge=100, description="Iterations per orbit")
    seeds: int = Field(default=16, ge=1, description="Seeds / orbits per evaluation")
