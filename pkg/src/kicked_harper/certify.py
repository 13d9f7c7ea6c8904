"""
Conservative numerical bounds.

A certified line maximum samples phi(z) = <F^k(z) - z, v> on the line
<z, v> = c with a fixed step and adds Lipschitz-constant * step. Every
upper-bound chain is multiplied by GUARD instead of using directed
rounding. These are conservative numerics, not interval arithmetic.
"""

import logging
import math
from typing import Optional

import numpy as np

from kicked_harper.constants import GUARD, VAR_WINDOWS, VAR_REFINE, TWO_PI
from kicked_harper.core import harper_xy, sin2pi
from kicked_harper.errors import NotCertified
from kicked_harper.models import (
    Params,
    CertBound,
    HalfPlaneCertificate,
    ModeLock,
)
from kicked_harper.orbits import orbit_stats_batch, periodic_construction

logger = logging.getLogger(__name__)

LINE_CHUNK = 1 << 18


def _jacobian_entry_bounds(p: Params) -> tuple[float, float, float]:
    ab = abs(p.alpha * p.beta)
    return 4.0 * math.pi**2 * ab, TWO_PI * abs(p.alpha), TWO_PI * abs(p.beta)


def lipschitz_bound(p: Params, power: int) -> float:
    """Upper bound on the operator norm of DF^power via the entrywise Frobenius norm of DF."""
    if power < 1:
        raise ValueError(f"power must be >= 1, got {power}")
    e11, e12, e21 = _jacobian_entry_bounds(p)
    norm = math.sqrt((1.0 + e11) ** 2 + e12**2 + e21**2 + 1.0) * GUARD
    return norm**power * GUARD


def _perturbation_bound(p: Params, power: int) -> float:
    # ||DF^k - I|| <= (1 + ||DF - I||)^k - 1, and ||DF - I|| is bounded by
    # the Frobenius norm of the off-identity part of DF.
    e11, e12, e21 = _jacobian_entry_bounds(p)
    e = math.sqrt(e11**2 + e12**2 + e21**2) * GUARD
    return ((1.0 + e) ** power - 1.0) * GUARD


def line_direction(v: tuple[float, float]) -> tuple[int, int]:
    """Primitive integer direction of the line <z, v> = c; phi is 1-periodic along it."""
    a, b = v
    if a != round(a) or b != round(b) or (a == 0 and b == 0):
        raise ValueError(f"v must be a nonzero integer vector, got {v}")
    a, b = int(round(a)), int(round(b))
    g = math.gcd(a, b)
    return b // g, -a // g


def line_values(p: Params, power: int, v, c: float, t: np.ndarray) -> np.ndarray:
    """phi(z(t)) with z(t) = c*v/|v|^2 + t*d."""
    d = line_direction(v)
    vv = v[0] ** 2 + v[1] ** 2
    x0 = c * v[0] / vv + t * d[0]
    y0 = c * v[1] / vv + t * d[1]
    x, y = x0, y0
    for _ in range(power):
        x, y = harper_xy(p.alpha, p.beta, x, y)
    return (x - x0) * v[0] + (y - y0) * v[1]


def certified_line_max(
    p: Params,
    power: int,
    v: tuple[float, float],
    c: float,
    u: tuple[int, int],
    step: float = 1e-6,
) -> CertBound:
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    n = int(math.ceil(1.0 / step))
    grid_max = -math.inf
    # fixed chunk boundaries keep the reduction order independent of callers
    for start in range(0, n + 1, LINE_CHUNK):
        t = np.arange(start, min(n + 1, start + LINE_CHUNK)) * step
        grid_max = max(grid_max, float(line_values(p, power, v, c, t).max()))

    d = line_direction(v)
    scale = math.hypot(*d) * math.hypot(*v)
    # phi has derivative <(DF^k - I)d, v>, and ||DF^k - I|| <= ||DF^k|| + 1
    chain = min(lipschitz_bound(p, power) + 1.0, _perturbation_bound(p, power))
    lipschitz = chain * scale * GUARD
    slack = lipschitz * step * GUARD
    rigorous = grid_max + slack + abs(grid_max) * (GUARD - 1.0)
    target = float(u[0] * v[0] + u[1] * v[1])
    logger.debug("line max at %s power %d: grid %.12f rigorous %.12f target %g", p, power, grid_max, rigorous, target)
    return CertBound(
        grid_max=grid_max,
        grid_step=step,
        lipschitz=lipschitz,
        rigorous_bound=rigorous,
        target=target,
        verdict=rigorous < target,
    )


def half_plane_confinement(
    p: Params,
    v: tuple[float, float],
    u: tuple[int, int],
    c: float,
    power: int,
    step: float = 1e-6,
    target: Optional[float] = None,
) -> HalfPlaneCertificate:
    """
    If <F^power(z) - z, v> < <u, v> on the line <z, v> = c then
    F^power maps the half-plane <z, v> <= c into itself plus u, so every
    rotation vector w of F satisfies <w, v> <= <u, v>/power.
    """
    bound = certified_line_max(p, power, v, c, u, step)
    if target is not None:
        bound = CertBound(
            grid_max=bound.grid_max,
            grid_step=bound.grid_step,
            lipschitz=bound.lipschitz,
            rigorous_bound=bound.rigorous_bound,
            target=target,
            verdict=bound.rigorous_bound < target,
        )
    if not bound.verdict:
        raise NotCertified(
            f"rigorous bound {bound.rigorous_bound:.6f} >= target {bound.target} at {p}",
            bound=bound,
        )
    return HalfPlaneCertificate(
        params=p,
        v=(float(v[0]), float(v[1])),
        u=(int(u[0]), int(u[1])),
        c=c,
        power=power,
        bound=bound,
    )


# which -> (params, v, u, c, power, claimed set)
_MODELOCK = {
    ModeLock.SQUARE11: (Params(1.0, 1.0), (0, 1), (0, 2), 0.125, 2, "[-1,1]^2"),
    ModeLock.DIAMOND_HALF: (Params(0.5, 0.5), (1, 1), (2, 0), 0.0, 4, "|x|+|y| <= 1/2"),
}


def _confine(which: ModeLock, p: Params, step: float, target: Optional[float]) -> list[HalfPlaneCertificate]:
    _, v, u, c, power, _ = _MODELOCK[which]
    certs = [half_plane_confinement(p, v, u, c, power, step, target)]
    if which is ModeLock.SQUARE11:
        # horizontal extent of rho(F_{a,b}) is the vertical extent of rho(F_{b,a})
        certs.append(half_plane_confinement(Params(p.beta, p.alpha), v, u, c, power, step, target))
    return certs


def _vertices_present(which: ModeLock, p: Params) -> bool:
    found = {r.vector for r in periodic_construction(p, 1)}
    if which is ModeLock.SQUARE11:
        need = {(sx, sy) for sx in (-1, 1) for sy in (-1, 1)}
    else:
        half = 0.5
        need = {(half, 0), (-half, 0), (0, half), (0, -half)}
    return all(any(float(a) == w[0] and float(b) == w[1] for a, b in found) for w in need)


def modelock_verify(
    which: ModeLock,
    step: float = 1e-6,
    target: Optional[float] = None,
    perturbation: float = 1e-4,
) -> dict:
    """
    Outer bound from half-plane certificates plus the rotation-set symmetries,
    inner bound from the explicit periodic orbits. verdict holds when both
    do, i.e. the rotation set equals the claimed set. Raises NotCertified if
    the base certificate fails; perturbed corners are reported, not raised.
    """
    which = ModeLock(which)
    p, _, _, _, _, claim = _MODELOCK[which]
    certs = _confine(which, p, step, target)
    outer = all(c.bound.verdict for c in certs)
    vertices = _vertices_present(which, p)
    corners = []
    for da in (-perturbation, perturbation):
        for db in (-perturbation, perturbation):
            q = Params(p.alpha + da, p.beta + db)
            try:
                qc = _confine(which, q, step, target)
                ok, worst = True, max(c.bound.rigorous_bound for c in qc)
            except NotCertified as exc:
                ok, worst = False, exc.bound.rigorous_bound
            present = _vertices_present(which, q)
            corners.append({
                "alpha": q.alpha,
                "beta": q.beta,
                "certified": ok,
                "rigorous_bound": worst,
                "vertices_present": present,
                "verdict": ok and present,
            })
    verdict = outer and vertices
    logger.info("mode-lock %s: outer bound %s, vertices %s", which.value, outer, vertices)
    return {
        "which": which.value,
        "params": {"alpha": p.alpha, "beta": p.beta},
        "claim": claim,
        "certificates": [certificate_to_json(c, step) for c in certs],
        "outer_bound": outer,
        "vertices_present": vertices,
        "verdict": verdict,
        "perturbed": corners,
    }


def var_min(amplitude: float, delta: float, grid: int = VAR_WINDOWS, refine: int = VAR_REFINE) -> float:
    """
    min over windows [t, t+delta] of (max - min) of amplitude*s on the window,
    with window starts on a grid over one period.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if grid < 1000:
        raise ValueError(f"grid must be >= 1000, got {grid}")
    if amplitude == 0:
        return 0.0
    starts = np.arange(grid) / grid
    offsets = np.linspace(0.0, delta, refine + 1)
    vals = sin2pi(starts[:, None] + offsets[None, :])
    spread = vals.max(axis=1) - vals.min(axis=1)
    return abs(amplitude) * float(spread.min())


def drift_check(
    alpha: float,
    beta: float,
    n_seeds: int = 64,
    n_iters: int = 100_000,
    slack: float = 0.9,
) -> dict:
    """
    Numerical side of the drift proposition: with delta = beta/2 and
    Var_{alpha s}(delta) >= 2, some orbit starting on [0,1] x {0} should
    climb with vertical speed at least beta - delta.

    observed comes from n_seeds evenly spaced orbits on the segment;
    witness_rotation is the vertical rotation of the explicit period-2
    orbits that start on it. passed needs the hypothesis to hold.
    """
    if n_seeds < 1 or n_iters < 1:
        raise ValueError(f"need n_seeds >= 1 and n_iters >= 1, got {n_seeds}, {n_iters}")
    delta = beta / 2.0
    variation = var_min(alpha, delta)
    applicable = variation >= 2.0
    predicted = beta - delta
    xs = (np.arange(n_seeds) + 0.5) / n_seeds
    _, y, _, _ = orbit_stats_batch(alpha, beta, xs, np.zeros_like(xs), n_iters)
    observed = float(np.max(np.abs(y)) / n_iters)
    witness = max(
        (abs(r.as_floats()[1]) for r in periodic_construction(Params(alpha, beta), 1) if r.witness.y == 0.0),
        default=0.0,
    )
    best = max(observed, witness)
    logger.debug("drift at (%g, %g): observed %.4f, witness %.4f, predicted %.4f", alpha, beta, observed, witness, predicted)
    return {
        "alpha": alpha,
        "beta": beta,
        "delta": delta,
        "variation": variation,
        "applicable": applicable,
        "predicted": predicted,
        "observed": observed,
        "witness_rotation": witness,
        "passed": applicable and best >= slack * predicted,
    }


def certificate_to_json(cert: HalfPlaneCertificate, step: Optional[float] = None) -> dict:
    b = cert.bound
    return {
        "v": list(cert.v),
        "u": list(cert.u),
        "c": cert.c,
        "power": cert.power,
        "step": b.grid_step if step is None else step,
        "grid_max": b.grid_max,
        "lipschitz": b.lipschitz,
        "rigorous_bound": b.rigorous_bound,
        "target": b.target,
        "verdict": b.verdict,
        "params": {"alpha": cert.params.alpha, "beta": cert.params.beta},
    }


def replay_certificate(data: dict, tol: float = 1e-12) -> dict:
    """Recompute grid_max for a serialized certificate and compare."""
    p = Params(float(data["params"]["alpha"]), float(data["params"]["beta"]))
    bound = certified_line_max(
        p,
        int(data["power"]),
        tuple(data["v"]),
        float(data["c"]),
        tuple(data["u"]),
        float(data["step"]),
    )
    stored = float(data["grid_max"])
    return {
        "grid_max": bound.grid_max,
        "stored_grid_max": stored,
        "bitwise_equal": bound.grid_max == stored,
        "within_tol": abs(bound.grid_max - stored) <= tol,
        "verdict": bound.verdict,
    }
