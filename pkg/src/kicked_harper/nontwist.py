"""
Standard non-twist map S_{a,b}(x, y) = V_b(x + a - kappa*y^2, y) and the
rescaling G~ = Phi_alpha o G o Phi_alpha^-1 of G = V_beta o H_alpha with
Phi_alpha(x, y) = (x, sqrt(kappa*alpha)*(y - 1/4)).

Under Phi_alpha, alpha*s(1/4 + Y/sqrt(kappa*alpha)) = alpha*cos(Y/sqrt(alpha))
= alpha - Y^2/2 + O(Y^4/alpha), so the induced annulus maps approach the
non-twist map with quadratic coefficient 1/2 (RESCALED_KAPPA).

The strip comparison works in the coordinates (a, b) = (alpha - n, sqrt(n)*beta).
With y = 1/4 + Y/sqrt(alpha), G_{n+a, b/sqrt(n+a)} becomes
x -> x + a - 2*pi^2*Y^2 + O(Y^4/alpha), Y -> Y + b*s(x), which is S_{a,b}
with kappa = 2*pi^2 (CONJECTURE_KAPPA), half the curvature constant above.
"""

import dataclasses
import logging
import math
from typing import Optional, Sequence

import numpy as np

from kicked_harper.constants import KAPPA, TWO_PI
from kicked_harper.core import sin2pi, cos2pi, harper_g_xy
from kicked_harper.diffusion import scan, classify_orbits, map_seeds
from kicked_harper.errors import NonpositiveAlpha
from kicked_harper.models import (
    Params,
    PlanePoint,
    NontwistParams,
    PixelVerdict,
    ScanGrid,
    Budget,
)

logger = logging.getLogger(__name__)

RESCALED_KAPPA = 0.5
CONJECTURE_KAPPA = KAPPA / 2.0


def nontwist_xy(a, b, x, y, kappa: float = KAPPA):
    x = x + a - kappa * y * y
    y = y + b * sin2pi(x)
    return x, y


def nontwist_jacobian_xy(a, b, x, y, kappa: float = KAPPA):
    """Entries (a11, a12, a21, a22) of DS at (x, y); the determinant is 1 identically."""
    k = TWO_PI * b * cos2pi(x + a - kappa * y * y)
    a12 = -2.0 * kappa * np.asarray(y, dtype=float)
    return np.ones_like(k), a12, k, 1.0 + k * a12


def nontwist_lift(q: NontwistParams, z: PlanePoint, kappa: float = KAPPA) -> PlanePoint:
    x, y = nontwist_xy(q.a, q.b, z.x, z.y, kappa)
    return PlanePoint(float(x), float(y))


def _scale(alpha: float) -> float:
    if alpha <= 0:
        raise NonpositiveAlpha(f"rescaling needs alpha > 0, got {alpha}")
    return math.sqrt(KAPPA * alpha)


def phi(alpha: float, x, y):
    return x, _scale(alpha) * (y - 0.25)


def phi_inv(alpha: float, x, y):
    return x, y / _scale(alpha) + 0.25


def rescaled_g_xy(alpha: float, beta: float, x, y):
    x, y = phi_inv(alpha, x, y)
    x, y = harper_g_xy(alpha, beta, x, y)
    return phi(alpha, x, y)


def rescaled_g(p: Params, z: PlanePoint) -> PlanePoint:
    x, y = rescaled_g_xy(p.alpha, p.beta, z.x, z.y)
    return PlanePoint(float(x), float(y))


def rescaled_g_split(p: Params, z: PlanePoint) -> PlanePoint:
    """V_{sqrt(kappa*alpha)*beta} o G~_{alpha,0}; equal to rescaled_g."""
    x, y = rescaled_g_xy(p.alpha, 0.0, z.x, z.y)
    y = y + _scale(p.alpha) * p.beta * sin2pi(x)
    return PlanePoint(float(x), float(y))


def _circle_gap(dx):
    return np.abs((dx + 0.5) % 1.0 - 0.5)


def rescaling_convergence(
    alpha0: float,
    n_list: Sequence[int],
    grid: tuple[int, int] = (64, 64),
) -> list[float]:
    """
    Sup distance on T^1 x [0,1] between the annulus map induced by
    G~_{alpha0+n,0} and the limiting non-twist map S_{alpha0,0}.
    """
    if not 0 <= alpha0 < 1:
        raise ValueError(f"alpha0 must be in [0, 1), got {alpha0}")
    xs = np.arange(grid[0]) / grid[0]
    ys = np.linspace(0.0, 1.0, grid[1])
    x, y = np.meshgrid(xs, ys, indexing="ij")
    sx, sy = nontwist_xy(alpha0, 0.0, x, y, RESCALED_KAPPA)
    out = []
    for n in n_list:
        alpha = alpha0 + n
        if alpha > 0:
            gx, gy = rescaled_g_xy(alpha, 0.0, x, y)
        else:
            # H_0 is the identity
            gx, gy = x, y
        dist = np.hypot(_circle_gap(gx - sx), gy - sy)
        out.append(float(dist.max()))
        logger.debug("rescaling distance at alpha=%g: %.3e", alpha, out[-1])
    return out


def nontwist_classify(
    q: NontwistParams,
    n_seeds: int = 32,
    n_iters: int = 100_000,
    rng_seed: int = 0,
    kappa: float = KAPPA,
) -> PixelVerdict:
    """Unbounded orbit presumed once some seed in T^1 x [0,1] moved vertically by >= 1."""
    if n_seeds < 1:
        raise ValueError(f"n_seeds must be >= 1, got {n_seeds}")
    seeds = map_seeds("nontwist", n_seeds, rng_seed)
    return classify_orbits(Params(q.a, q.b), seeds, n_iters, map_tag="nontwist", kappa=kappa, need_x=False)


@dataclasses.dataclass(frozen=True)
class ConjectureReport:
    n: int
    kappa: float
    e_grid: ScanGrid
    a_grid: ScanGrid
    mismatch: float


def grid_mismatch(a: np.ndarray, b: np.ndarray) -> float:
    """Fraction of pixels where two equally-shaped boolean masks differ."""
    a, b = np.asarray(a, dtype=bool), np.asarray(b, dtype=bool)
    if a.shape != b.shape:
        raise ValueError(f"mask shapes differ: {a.shape} vs {b.shape}")
    return float(np.mean(a ^ b))


def rescaled_e_grid(n: int, resolution: tuple[int, int], budget: Budget, rng_seed: int = 0, threads: Optional[int] = None) -> ScanGrid:
    """Harper scan of [n, n+1] x [0, 1/sqrt(n)] mapped to [0,1]^2 by (a, b) -> (a - n, sqrt(n) b)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    root = math.sqrt(n)
    raw = scan((n, n + 1), (0.0, 1.0 / root), resolution, budget, rng_seed, threads)
    verdicts = tuple(
        dataclasses.replace(v, params=Params(v.params.alpha - n, v.params.beta * root))
        for v in raw.verdicts
    )
    return ScanGrid((0.0, 1.0), (0.0, 1.0), raw.resolution, verdicts)


def nontwist_grid(
    resolution: tuple[int, int],
    budget: Budget,
    rng_seed: int = 0,
    threads: Optional[int] = None,
    kappa: float = CONJECTURE_KAPPA,
) -> ScanGrid:
    return scan((0.0, 1.0), (0.0, 1.0), resolution, budget, rng_seed, threads, map_tag="nontwist", kappa=kappa)


def conjecture_rescaled_set(
    n: int,
    resolution: tuple[int, int] = (32, 32),
    budget: Budget = Budget(8, 20_000),
    rng_seed: int = 0,
    threads: Optional[int] = None,
) -> ConjectureReport:
    """Rescaled non-diffusive strip next to the non-twist unbounded-orbit set; no target."""
    e_grid = rescaled_e_grid(n, resolution, budget, rng_seed, threads)
    a_grid = nontwist_grid(resolution, budget, rng_seed, threads)
    mismatch = grid_mismatch(~e_grid.detected_mask(), a_grid.detected_mask())
    logger.info("conjecture strip n=%d: mismatch %.3f", n, mismatch)
    return ConjectureReport(n=n, kappa=CONJECTURE_KAPPA, e_grid=e_grid, a_grid=a_grid, mismatch=mismatch)
