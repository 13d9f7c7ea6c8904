"""
The vector field W^{lam,alpha}(x, y) = (s(y + alpha*lam*s(x)), lam*s(x)).

One Euler step of size alpha for W^{lam,alpha} is exactly F_{alpha, lam*alpha};
n_alpha = floor(1/alpha) steps approximate the time-n_alpha*alpha flow with an
O(alpha) error in C^0 and C^1.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.stats import qmc

from kicked_harper.constants import TWO_PI, FLOW_MAX_STEPS
from kicked_harper.core import sin2pi, cos2pi, harper_xy, jacobian_xy
from kicked_harper.diffusion import classify_pixel
from kicked_harper.errors import ToleranceUnreachable
from kicked_harper.models import (
    Params,
    PlanePoint,
    FlowSpec,
    ConvergenceReport,
    Budget,
)
from kicked_harper.orbits import orbit_stats_batch

logger = logging.getLogger(__name__)


def field_xy(lam: float, alpha: float, x, y):
    sx = sin2pi(x)
    return sin2pi(y + alpha * lam * sx), lam * sx


def field_w(spec: FlowSpec, z: PlanePoint) -> tuple[float, float]:
    w1, w2 = field_xy(spec.lam, spec.alpha, z.x, z.y)
    return float(w1), float(w2)


def field_jacobian_xy(lam: float, alpha: float, x, y):
    cx = cos2pi(x)
    cw = cos2pi(y + alpha * lam * sin2pi(x))
    return (
        TWO_PI * cw * alpha * lam * TWO_PI * cx,
        TWO_PI * cw,
        TWO_PI * lam * cx,
        np.zeros_like(cx),
    )


def euler_identity_check(spec: FlowSpec, z: PlanePoint) -> float:
    """|F_{alpha, lam*alpha}(z) - (z + alpha*W(z))|; zero up to rounding."""
    fx, fy = harper_xy(spec.alpha, spec.lam * spec.alpha, z.x, z.y)
    w1, w2 = field_xy(spec.lam, spec.alpha, z.x, z.y)
    return float(math.hypot(fx - (z.x + spec.alpha * w1), fy - (z.y + spec.alpha * w2)))


def _rhs(lam: float, alpha: float, state: np.ndarray) -> np.ndarray:
    x, y = state[0], state[1]
    w1, w2 = field_xy(lam, alpha, x, y)
    if len(state) == 2:
        return np.stack([w1, w2])
    j11, j12, j21, j22 = field_jacobian_xy(lam, alpha, x, y)
    u11, u12, u21, u22 = state[2], state[3], state[4], state[5]
    return np.stack([
        w1,
        w2,
        j11 * u11 + j12 * u21,
        j11 * u12 + j12 * u22,
        j21 * u11 + j22 * u21,
        j21 * u12 + j22 * u22,
    ])


def _rk4(lam: float, alpha: float, state: np.ndarray, t: float, n: int) -> np.ndarray:
    h = t / n
    for _ in range(n):
        k1 = _rhs(lam, alpha, state)
        k2 = _rhs(lam, alpha, state + 0.5 * h * k1)
        k3 = _rhs(lam, alpha, state + 0.5 * h * k2)
        k4 = _rhs(lam, alpha, state + h * k3)
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return state


def _integrate(lam: float, alpha: float, state: np.ndarray, t: float, tol: float) -> np.ndarray:
    """Fixed-step RK4, halving h until the Richardson estimate is below tol."""
    if not 0 <= t <= 1:
        raise ValueError(f"t must be in [0, 1], got {t}")
    if tol < 1e-13:
        raise ValueError(f"tol must be >= 1e-13, got {tol}")
    if t == 0:
        return state.copy()
    n = 16
    coarse = _rk4(lam, alpha, state, t, n)
    while True:
        if 2 * n > FLOW_MAX_STEPS:
            raise ToleranceUnreachable(f"no step size down to t/{n} reaches tol {tol}")
        fine = _rk4(lam, alpha, state, t, 2 * n)
        err = float(np.max(np.abs(fine - coarse))) / 15.0
        if err < tol:
            logger.debug("flow to t=%g converged with %d steps (est %.2e)", t, 2 * n, err)
            return fine
        coarse, n = fine, 2 * n


def flow_xy(lam: float, alpha: float, t: float, x, y, tol: float = 1e-12):
    state = np.stack([np.asarray(x, dtype=float), np.asarray(y, dtype=float)])
    out = _integrate(lam, alpha, state, t, tol)
    return out[0], out[1]


def reference_flow(spec: FlowSpec, t: float, z: PlanePoint, tol: float = 1e-12) -> PlanePoint:
    x, y = flow_xy(spec.lam, spec.alpha, t, np.array([z.x]), np.array([z.y]), tol)
    return PlanePoint(float(x[0]), float(y[0]))


def variational_flow(lam: float, alpha: float, t: float, x, y, tol: float = 1e-11):
    """Time-t flow together with its derivative U, U' = DW(z(t)) U, U(0) = I."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    one, zero = np.ones_like(x), np.zeros_like(x)
    state = np.stack([x, y, one, zero, zero, one])
    out = _integrate(lam, alpha, state, t, tol)
    return out[0], out[1], out[2:].reshape(2, 2, *x.shape)


def euler_jacobian_chain(lam: float, alpha: float, n: int, x, y):
    """n Euler steps (= F_{alpha, lam*alpha}) and the product of their exact Jacobians."""
    beta = lam * alpha
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m11, m12 = np.ones_like(x), np.zeros_like(x)
    m21, m22 = np.zeros_like(x), np.ones_like(x)
    for _ in range(n):
        a11, a12, a21, a22 = jacobian_xy(alpha, beta, x, y)
        m11, m12, m21, m22 = (
            a11 * m11 + a12 * m21,
            a11 * m12 + a12 * m22,
            a21 * m11 + a22 * m21,
            a21 * m12 + a22 * m22,
        )
        x, y = harper_xy(alpha, beta, x, y)
    return x, y, np.stack([np.stack([m11, m12]), np.stack([m21, m22])])


def _fit_order(deltas: Sequence[float], errors: Sequence[float]) -> float:
    errs = np.maximum(np.asarray(errors, dtype=float), np.finfo(float).tiny)
    return float(np.polyfit(np.log(deltas), np.log(errs), 1)[0])


def euler_convergence(
    lam: float,
    alphas: Sequence[float],
    sample: int = 64,
    seed: int = 0,
    tol: float = 1e-11,
) -> ConvergenceReport:
    if len(alphas) < 3:
        raise ValueError("need at least three step sizes to fit an order")
    z0 = qmc.Halton(d=2, scramble=True, seed=seed).random(sample)
    x0, y0 = z0[:, 0], z0[:, 1]
    c0, c1 = [], []
    for alpha in alphas:
        spec = FlowSpec(lam, alpha)
        n = spec.n_alpha
        t = n * alpha
        ex, ey, em = euler_jacobian_chain(lam, alpha, n, x0, y0)
        fx, fy, fm = variational_flow(lam, alpha, t, x0, y0, tol)
        c0.append(float(np.max(np.hypot(ex - fx, ey - fy))))
        c1.append(float(np.max(np.sqrt(((em - fm) ** 2).sum(axis=(0, 1))))))
        logger.info("euler step %g (%d steps): C0 %.3e C1 %.3e", alpha, n, c0[-1], c1[-1])
    return ConvergenceReport(
        deltas=tuple(float(a) for a in alphas),
        sup_errors_c0=tuple(c0),
        sup_errors_c1=tuple(c1),
        fitted_order=_fit_order(alphas, c0),
        fitted_order_c1=_fit_order(alphas, c1),
    )


def cusp_experiment(
    lam: float,
    alpha_list: Sequence[float],
    budget: Budget = Budget(16, 50_000),
    rng_seed: int = 0,
    annulus: tuple[float, float] = (0.05, 0.2),
) -> dict:
    """
    Along the ray beta = lam*alpha, classify each alpha and record the largest
    vertical displacement of orbits started in the horizontal annulus.
    """
    if not 0 <= lam <= 1:
        raise ValueError(f"lam must be in [0, 1], got {lam}")
    z0 = qmc.Halton(d=2, scramble=True, seed=rng_seed).random(budget.n_seeds)
    x0 = z0[:, 0]
    y0 = annulus[0] + (annulus[1] - annulus[0]) * z0[:, 1]
    rows = []
    threshold: Optional[float] = None
    for alpha in sorted(alpha_list):
        p = Params(alpha, lam * alpha)
        v = classify_pixel(p, budget.n_seeds, budget.n_iters, rng_seed)
        _, _, _, dy = orbit_stats_batch(p.alpha, p.beta, x0, y0, budget.n_iters)
        rows.append({
            "alpha": alpha,
            "beta": p.beta,
            "verdict": v.verdict.value,
            "annulus_dy_max": float(dy.max()),
        })
        if threshold is None and v.detected:
            threshold = alpha
    return {"lambda": lam, "rows": rows, "threshold": threshold}
