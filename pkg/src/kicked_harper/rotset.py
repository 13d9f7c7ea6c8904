"""
Rotation-set approximation.

The estimate is an inner approximation: the convex hull of long-orbit
displacement averages (F^n(z) - z)/n, the exactly known rational rotation
vectors, and their images under the symmetries the rotation set is known to
have. Outer bounds live in kicked_harper.certify.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist
from scipy.stats import qmc

from kicked_harper.constants import (
    COLLINEAR_TOL,
    HAUSDORFF_DIRECTIONS,
    DEFAULT_ORBITS,
    DEFAULT_ORBIT_ITERS,
)
from kicked_harper.errors import EmptyPolygon
from kicked_harper.models import Params, ConvexPolygon, Shape
from kicked_harper.orbits import orbit_stats_batch, exact_rotations

logger = logging.getLogger(__name__)


def _as_polygon(pts) -> ConvexPolygon:
    return ConvexPolygon(tuple((float(q[0]), float(q[1])) for q in pts))


def _segment_hull(pts: np.ndarray) -> ConvexPolygon:
    """Hull of points on one line: its two extreme points, or one point."""
    d = pts[np.argmax(np.hypot(*(pts - pts[0]).T))] - pts[0]
    t = (pts - pts[0]) @ d
    lo, hi = pts[np.argmin(t)], pts[np.argmax(t)]
    if np.allclose(lo, hi, atol=COLLINEAR_TOL):
        return _as_polygon([lo])
    return _as_polygon([lo, hi])


def _drop_collinear(v: np.ndarray, tol: float) -> np.ndarray:
    prv, nxt = np.roll(v, 1, axis=0), np.roll(v, -1, axis=0)
    cr = (v[:, 0] - prv[:, 0]) * (nxt[:, 1] - prv[:, 1]) - (v[:, 1] - prv[:, 1]) * (nxt[:, 0] - prv[:, 0])
    return v[np.abs(cr) > tol]


def convex_hull(points, tol: float = COLLINEAR_TOL) -> ConvexPolygon:
    """Counterclockwise hull vertices, dropping (near-)collinear ones."""
    pts = np.unique(np.round(np.asarray(points, dtype=float).reshape(-1, 2), 15), axis=0)
    if len(pts) == 0:
        raise EmptyPolygon("no points to hull")
    if len(pts) <= 2:
        return _segment_hull(pts)
    rel = pts - pts[0]
    far = rel[np.argmax(np.hypot(rel[:, 0], rel[:, 1]))]
    if np.abs(far[0] * rel[:, 1] - far[1] * rel[:, 0]).max() <= tol:
        return _segment_hull(pts)
    try:
        hull = ConvexHull(pts)
    except QhullError:
        logger.debug("qhull rejected %d points; treating them as collinear", len(pts))
        return _segment_hull(pts)
    # 2-d qhull vertices are counterclockwise
    v = _drop_collinear(pts[hull.vertices], tol)
    return _as_polygon(v) if len(v) >= 3 else _segment_hull(pts)


def symmetrize(points, with_r: bool = False) -> np.ndarray:
    """Close a point set under S1, S2 (and R when with_r) and add the origin."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    x, y = pts[:, 0], pts[:, 1]
    images = [pts, np.c_[-x, y], np.c_[x, -y], np.c_[-x, -y]]
    if with_r:
        # R generates the remaining elements of the dihedral group with S1, S2
        images += [np.c_[-y, x], np.c_[y, -x], np.c_[y, x], np.c_[-y, -x]]
    images.append(np.zeros((1, 2)))
    return np.vstack(images)


def symmetrize_polygon(poly: ConvexPolygon, with_r: bool = False) -> ConvexPolygon:
    return convex_hull(symmetrize(poly.as_array(), with_r))


def _seeds(n_orbits: int, seed: int) -> np.ndarray:
    return qmc.Halton(d=2, scramble=True, seed=seed).random(n_orbits)


def birkhoff_points(p: Params, n_orbits: int, n_iters: int, seed: int = 0, threads: Optional[int] = None) -> np.ndarray:
    """(F^n(z) - z)/n for n_orbits low-discrepancy seeds z in [0,1)^2."""
    z0 = _seeds(n_orbits, seed)
    x, y, _, _ = orbit_stats_batch(p.alpha, p.beta, z0[:, 0], z0[:, 1], n_iters, threads)
    return np.c_[(x - z0[:, 0]) / n_iters, (y - z0[:, 1]) / n_iters]


def approx_rotation_set(
    p: Params,
    n_orbits: int = DEFAULT_ORBITS,
    n_iters: int = DEFAULT_ORBIT_ITERS,
    seed: int = 0,
    threads: Optional[int] = None,
) -> ConvexPolygon:
    if n_orbits < 1:
        raise ValueError(f"n_orbits must be >= 1, got {n_orbits}")
    if n_iters < 100:
        raise ValueError(f"n_iters must be >= 100, got {n_iters}")
    pts = birkhoff_points(p, n_orbits, n_iters, seed, threads)
    exact = [r.as_floats() for r in exact_rotations(p)]
    if exact:
        pts = np.vstack([pts, np.asarray(exact)])
    logger.info("rotation set at %s: %d orbit points, %d exact", p, n_orbits, len(exact))
    return convex_hull(symmetrize(pts, with_r=p.on_diagonal))


def _segment_distance(q: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0 else min(1.0, max(0.0, float((q - a) @ ab) / denom))
    return float(np.hypot(*(q - (a + t * ab))))


def point_distance(poly: ConvexPolygon, q) -> float:
    """Euclidean distance from q to the polygon (0 inside)."""
    v = poly.as_array()
    q = np.asarray(q, dtype=float)
    if len(v) == 0:
        raise EmptyPolygon("empty polygon")
    if len(v) == 1:
        return float(np.hypot(*(q - v[0])))
    if len(v) >= 3:
        nxt = np.roll(v, -1, axis=0)
        cr = (nxt[:, 0] - v[:, 0]) * (q[1] - v[:, 1]) - (nxt[:, 1] - v[:, 1]) * (q[0] - v[:, 0])
        if np.all(cr >= -COLLINEAR_TOL):
            return 0.0
    edges = zip(v, np.roll(v, -1, axis=0)) if len(v) >= 3 else [(v[0], v[1])]
    return min(_segment_distance(q, a, b) for a, b in edges)


def contains(poly: ConvexPolygon, q, tol: float = 0.0) -> bool:
    return point_distance(poly, q) <= tol


def support(poly: ConvexPolygon, directions: np.ndarray) -> np.ndarray:
    return (directions @ poly.as_array().T).max(axis=1)


def directed_distance(a: ConvexPolygon, b: ConvexPolygon) -> float:
    """sup over a of the distance to b; attained at a vertex of a."""
    return max(point_distance(b, q) for q in a.as_array())


def hausdorff(a: ConvexPolygon, b: ConvexPolygon) -> float:
    if not a.vertices or not b.vertices:
        raise EmptyPolygon("hausdorff distance needs two nonempty polygons")
    theta = np.linspace(0.0, 2.0 * math.pi, HAUSDORFF_DIRECTIONS, endpoint=False)
    dirs = np.c_[np.cos(theta), np.sin(theta)]
    sampled = float(np.abs(support(a, dirs) - support(b, dirs)).max())
    return max(sampled, directed_distance(a, b), directed_distance(b, a))


def diameter(poly: ConvexPolygon) -> float:
    """Largest vertex-to-vertex distance."""
    v = poly.as_array()
    return float(pdist(v).max()) if len(v) >= 2 else 0.0


def shape_classify(poly: ConvexPolygon, tol: float = 1e-3) -> Shape:
    v = poly.as_array()
    width_x = float(np.ptp(v[:, 0]))
    width_y = float(np.ptp(v[:, 1]))
    if diameter(poly) < tol:
        return Shape.ORIGIN
    if width_x < tol <= width_y:
        return Shape.VERTICAL_SEGMENT
    if width_y < tol <= width_x:
        return Shape.HORIZONTAL_SEGMENT
    return Shape.FULL_DIM


def box(half_width: float, half_height: Optional[float] = None) -> ConvexPolygon:
    h = half_width if half_height is None else half_height
    w = half_width
    return convex_hull([(-w, -h), (w, -h), (w, h), (-w, h)])


def diamond(radius: float) -> ConvexPolygon:
    return convex_hull([(radius, 0), (0, radius), (-radius, 0), (0, -radius)])


def continuity_distance(
    p: Params,
    radius: float,
    n_samples: int = 4,
    n_orbits: int = 64,
    n_iters: int = 10_000,
    seed: int = 0,
    one_sided: bool = False,
    threads: Optional[int] = None,
) -> float:
    """
    Largest Hausdorff distance from the estimate at p to estimates at nearby parameters.

    Parameters are drawn uniformly from the disc of the given radius. The
    estimates are inner approximations: a vertex realized only by periodic
    orbits that exist for |alpha|, |beta| >= n (or >= 1/2) is lost just
    below that corner, so there the value measures the estimator rather
    than the rotation set. one_sided restricts sampling to the quarter disc
    toward larger |alpha| and |beta|, the side on which the corner orbits
    persist.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    base = approx_rotation_set(p, n_orbits, n_iters, seed, threads)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        r = radius * math.sqrt(rng.random())
        phi = (0.5 if one_sided else 2.0) * math.pi * rng.random()
        da, db = r * math.cos(phi), r * math.sin(phi)
        if one_sided:
            da, db = math.copysign(da, p.alpha), math.copysign(db, p.beta)
        q = Params(p.alpha + da, p.beta + db)
        d = hausdorff(base, approx_rotation_set(q, n_orbits, n_iters, seed, threads))
        logger.debug("continuity at %s: %.3e", q, d)
        worst = max(worst, d)
    return worst


def monotonicity_report(
    ts: list[float],
    n_orbits: int = 64,
    n_iters: int = 10_000,
    seed: int = 0,
    tol: float = 0.0,
    threads: Optional[int] = None,
) -> list[dict]:
    """Nested-hull report along the diagonal t -> (t, t) for increasing t."""
    ts = sorted(ts)
    hulls = [approx_rotation_set(Params(t, t), n_orbits, n_iters, seed, threads) for t in ts]
    rows = []
    for (t0, h0), (t1, h1) in zip(zip(ts, hulls), zip(ts[1:], hulls[1:])):
        excess = directed_distance(h0, h1)
        rows.append({"t_lo": t0, "t_hi": t1, "excess": excess, "nested": excess <= tol})
    return rows
