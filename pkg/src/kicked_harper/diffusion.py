"""
Displacement-threshold classifier and parameter-space sweeps.

A pixel is NDetected as soon as some orbit moved by at least one unit
horizontally and some (possibly other) orbit moved by at least one unit
vertically. That is conclusive: the rotation set then has nonempty interior.
EPresumed only means nothing was detected within the budget.
"""

import csv
import hashlib
import io
import logging
from typing import Optional, Sequence

import numpy as np
from scipy.stats import qmc

from kicked_harper import kernels
from kicked_harper.constants import CSV_HEADER, KAPPA
from kicked_harper.errors import UpperEndpointNotDiffusive
from kicked_harper.models import (
    Params,
    PlanePoint,
    PixelVerdict,
    ScanGrid,
    BetaThresholds,
    Budget,
    Verdict,
)
from kicked_harper.workers import use_threads

logger = logging.getLogger(__name__)


def pixel_seed(master_seed: int, i: int, j: int) -> int:
    """64-bit per-pixel seed; independent of evaluation order."""
    blob = f"{master_seed}:{i}:{j}".encode("ascii")
    return int.from_bytes(hashlib.blake2b(blob, digest_size=8).digest(), "little")


def default_seeds(n_seeds: int, rng_seed: int) -> np.ndarray:
    """(0.25, 0.25) followed by scrambled Halton points in [0,1)^2."""
    first = np.array([[0.25, 0.25]])
    if n_seeds == 1:
        return first
    rest = qmc.Halton(d=2, scramble=True, seed=rng_seed).random(n_seeds - 1)
    return np.vstack([first, rest])


def map_seeds(map_tag: str, n_seeds: int, rng_seed: int) -> np.ndarray:
    """Seeds for one pixel; the non-twist map samples T^1 x [0,1] without a fixed first seed."""
    if map_tag == "nontwist":
        return qmc.Halton(d=2, scramble=True, seed=rng_seed).random(n_seeds)
    return default_seeds(n_seeds, rng_seed)


def _verdict(p: Params, x0: np.ndarray, y0: np.ndarray, used: int, wx: int, wy: int, dx: float, dy: float, need_x: bool) -> PixelVerdict:
    detected = (wx >= 0 or not need_x) and wy >= 0
    return PixelVerdict(
        params=p,
        verdict=Verdict.N_DETECTED if detected else Verdict.E_PRESUMED,
        dx_max=float(dx),
        dy_max=float(dy),
        iterations_used=int(used),
        seeds_used=len(x0),
        witness_x=PlanePoint(float(x0[wx]), float(y0[wx])) if wx >= 0 else None,
        witness_y=PlanePoint(float(x0[wy]), float(y0[wy])) if wy >= 0 else None,
    )


def classify_orbits(
    p: Params,
    seeds: np.ndarray,
    n_iters: int,
    map_tag: str = "harper",
    kappa: float = KAPPA,
    need_x: bool = True,
) -> PixelVerdict:
    """
    Iterate every seed until both thresholds are met or the budget runs out.

    need_x=False drops the horizontal requirement (used for maps where only
    vertical escape is meaningful).
    """
    if n_iters < 1:
        raise ValueError(f"n_iters must be >= 1, got {n_iters}")
    seeds = np.asarray(seeds, dtype=float).reshape(-1, 2)
    x0 = np.ascontiguousarray(seeds[:, 0])
    y0 = np.ascontiguousarray(seeds[:, 1])
    used, wx, wy, dx, dy = kernels.classify_seeds(
        kernels.map_kind(map_tag), float(p.alpha), float(p.beta), float(kappa), x0, y0, int(n_iters), bool(need_x)
    )
    return _verdict(p, x0, y0, used, wx, wy, dx, dy, need_x)


def classify_pixel(
    p: Params,
    n_seeds: int = 32,
    n_iters: int = 100_000,
    rng_seed: int = 0,
    seeds: Optional[np.ndarray] = None,
) -> PixelVerdict:
    if n_seeds < 1:
        raise ValueError(f"n_seeds must be >= 1, got {n_seeds}")
    if seeds is None:
        seeds = default_seeds(n_seeds, rng_seed)
    return classify_orbits(p, seeds, n_iters)


def replay_pixel(verdict: PixelVerdict, rng_seed: int, n_iters: int) -> PixelVerdict:
    """Recompute a verdict from the configuration that produced it."""
    return classify_pixel(verdict.params, verdict.seeds_used, n_iters, rng_seed)


def pixel_centers(lo: float, hi: float, n: int) -> np.ndarray:
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


def _validate_range(name: str, rng: Sequence[float]) -> tuple[float, float]:
    lo, hi = float(rng[0]), float(rng[1])
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
        raise ValueError(f"{name} range [{lo}, {hi}] is empty")
    return lo, hi


def scan(
    alpha_range: Sequence[float],
    beta_range: Sequence[float],
    resolution: tuple[int, int],
    budget: Budget = Budget(),
    rng_seed: int = 0,
    threads: Optional[int] = None,
    map_tag: str = "harper",
    kappa: float = KAPPA,
) -> ScanGrid:
    """
    Classify every pixel centre of the grid. Pixel (i, j) uses the seed
    pixel_seed(rng_seed, i, j), so results do not depend on thread count.

    map_tag="nontwist" classifies the standard non-twist map instead, on
    vertical displacement alone.
    """
    a_lo, a_hi = _validate_range("alpha", alpha_range)
    b_lo, b_hi = _validate_range("beta", beta_range)
    nx, ny = resolution
    if nx < 1 or ny < 1:
        raise ValueError(f"resolution must be positive, got {resolution}")
    if budget.n_seeds < 1 or budget.n_iters < 1:
        raise ValueError(f"budget must be positive, got {budget}")
    kind = kernels.map_kind(map_tag)
    need_x = kind == kernels.HARPER
    alphas = pixel_centers(a_lo, a_hi, nx)
    betas = pixel_centers(b_lo, b_hi, ny)

    params = [Params(float(alphas[i]), float(betas[j])) for j in range(ny) for i in range(nx)]
    seeds = np.stack([
        map_seeds(map_tag, budget.n_seeds, pixel_seed(rng_seed, i, j))
        for j in range(ny)
        for i in range(nx)
    ])
    x0 = np.ascontiguousarray(seeds[:, :, 0])
    y0 = np.ascontiguousarray(seeds[:, :, 1])
    a = np.array([p.alpha for p in params])
    b = np.array([p.beta for p in params])

    n = use_threads(threads)
    logger.info("scanning %dx%d %s pixels on %d threads, budget %s", nx, ny, map_tag, n, budget)
    used, wx, wy, dx, dy = kernels.classify_grid(kind, a, b, float(kappa), x0, y0, int(budget.n_iters), need_x)
    verdicts = tuple(
        _verdict(params[k], x0[k], y0[k], used[k], wx[k], wy[k], dx[k], dy[k], need_x)
        for k in range(len(params))
    )
    return ScanGrid(
        alpha_range=(a_lo, a_hi),
        beta_range=(b_lo, b_hi),
        resolution=(nx, ny),
        verdicts=verdicts,
        map_tag=map_tag,
    )


def estimate_beta_minus_upper(
    alpha: float,
    beta_lo: float,
    beta_hi: float,
    bisection_steps: int = 12,
    budget: Budget = Budget(16, 40_000),
    rng_seed: int = 0,
) -> BetaThresholds:
    """
    Smallest beta in [beta_lo, beta_hi] found diffusive by bisection.

    Only NDetected moves the upper end; EPresumed is inconclusive and moves
    the lower end, so the result may overestimate beta^-(alpha).
    """
    if alpha < 0.5:
        raise ValueError(f"alpha must be >= 1/2, got {alpha}")
    if not 0 <= beta_lo < beta_hi:
        raise ValueError(f"need 0 <= beta_lo < beta_hi, got [{beta_lo}, {beta_hi}]")

    used = 0
    steps = []

    def run(beta: float) -> bool:
        nonlocal used
        v = classify_pixel(Params(alpha, beta), budget.n_seeds, budget.n_iters, rng_seed)
        used += v.iterations_used * v.seeds_used
        steps.append((beta, v.verdict.value))
        logger.debug("alpha=%g beta=%.10g -> %s after %d iterations", alpha, beta, v.verdict.value, v.iterations_used)
        return v.detected

    if not run(beta_hi):
        raise UpperEndpointNotDiffusive(
            f"(alpha, beta) = ({alpha}, {beta_hi}) not detected diffusive within {budget}"
        )
    lo, hi = beta_lo, beta_hi
    for _ in range(bisection_steps):
        mid = 0.5 * (lo + hi)
        if run(mid):
            hi = mid
        else:
            lo = mid
    return BetaThresholds(alpha=alpha, beta_minus_upper=hi, budget=used, steps=tuple(steps))


def _intensity(v: PixelVerdict) -> int:
    d = v.dy_max if v.params.below_diagonal else v.dx_max
    return int(np.floor(255.0 * min(1.0, max(0.0, d))))


def render(grid: ScanGrid) -> np.ndarray:
    """
    RGB image, top row at the largest beta. NDetected is white; otherwise the
    red channel encodes the displacement that bounded motion is measured in.
    """
    nx, ny = grid.resolution
    img = np.zeros((ny, nx, 3), dtype=np.uint8)
    for j in range(ny):
        for i in range(nx):
            v = grid.at(i, j)
            row = ny - 1 - j
            if v.detected:
                img[row, i] = 255
            else:
                img[row, i, 0] = _intensity(v)
    return img


def to_pgm(img: np.ndarray) -> bytes:
    red = np.ascontiguousarray(img[..., 0], dtype=np.uint8)
    h, w = red.shape
    return b"P5\n%d %d\n255\n" % (w, h) + red.tobytes()


def to_ppm(img: np.ndarray) -> bytes:
    rgb = np.ascontiguousarray(img, dtype=np.uint8)
    h, w = rgb.shape[:2]
    return b"P6\n%d %d\n255\n" % (w, h) + rgb.tobytes()


def to_csv(grid: ScanGrid) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    tagged = grid.map_tag != "harper"
    writer.writerow(CSV_HEADER + (("map",) if tagged else ()))
    for v in grid.verdicts:
        row = [
            f"{v.params.alpha:.17g}",
            f"{v.params.beta:.17g}",
            v.verdict.value,
            f"{v.dx_max:.17g}",
            f"{v.dy_max:.17g}",
            v.iterations_used,
            v.seeds_used,
        ]
        if tagged:
            row.append(grid.map_tag)
        writer.writerow(row)
    return buf.getvalue()


def write_image(path, img: np.ndarray) -> None:
    """Binary PGM (red channel) for a .pgm path, PPM otherwise."""
    path = str(path)
    data = to_pgm(img) if path.endswith(".pgm") else to_ppm(img)
    with open(path, "wb") as fh:
        fh.write(data)
