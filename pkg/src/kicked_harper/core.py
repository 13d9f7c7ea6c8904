"""
Exact evaluation of the kicked Harper lifts F = H_alpha o V_beta.

    V_beta(x, y)  = (x, y + beta*s(x))
    H_alpha(x, y) = (x + alpha*s(y), y)        s(t) = sin(2*pi*t)

The ``*_xy`` functions work on floats or numpy arrays of any shape. Long
orbit loops run in kicked_harper.kernels, which repeats the same arithmetic
in compiled form. The PlanePoint wrappers are the public single-point API.
"""

import cmath
import math

import numpy as np

from kicked_harper.constants import TWO_PI, EIGEN_TOL
from kicked_harper.errors import DegenerateParams
from kicked_harper.models import (
    Params,
    PlanePoint,
    Jacobian2,
    FixedPointReport,
    FixedPointKind,
    Symmetry,
)


def sin2pi(t):
    """sin(2*pi*t), reducing t to [-1/2, 1/2] before scaling by 2*pi."""
    t = np.asarray(t, dtype=float)
    return np.sin(TWO_PI * (t - np.round(t)))


def cos2pi(t):
    t = np.asarray(t, dtype=float)
    return np.cos(TWO_PI * (t - np.round(t)))


def harper_xy(alpha, beta, x, y):
    y = y + beta * sin2pi(x)
    x = x + alpha * sin2pi(y)
    return x, y


def harper_inv_xy(alpha, beta, x, y):
    x = x - alpha * sin2pi(y)
    y = y - beta * sin2pi(x)
    return x, y


def harper_g_xy(alpha, beta, x, y):
    x = x + alpha * sin2pi(y)
    y = y + beta * sin2pi(x)
    return x, y


def jacobian_xy(alpha, beta, x, y):
    """Entries (a11, a12, a21, a22) of DF at (x, y), broadcast over arrays."""
    c_prime = cos2pi(y + beta * sin2pi(x))
    c_x = cos2pi(x)
    a11 = 4.0 * math.pi**2 * alpha * beta * c_prime * c_x + 1.0
    a12 = TWO_PI * alpha * c_prime
    a21 = TWO_PI * beta * c_x
    a22 = np.ones_like(a11)
    return a11, a12, a21, a22


def _point(x, y) -> PlanePoint:
    return PlanePoint(float(x), float(y))


def shear_h(p: Params, z: PlanePoint) -> PlanePoint:
    return _point(z.x + p.alpha * sin2pi(z.y), z.y)


def shear_v(p: Params, z: PlanePoint) -> PlanePoint:
    return _point(z.x, z.y + p.beta * sin2pi(z.x))


def lift_f(p: Params, z: PlanePoint) -> PlanePoint:
    return _point(*harper_xy(p.alpha, p.beta, z.x, z.y))


def lift_g(p: Params, z: PlanePoint) -> PlanePoint:
    return _point(*harper_g_xy(p.alpha, p.beta, z.x, z.y))


def lift_f_inv(p: Params, z: PlanePoint) -> PlanePoint:
    return _point(*harper_inv_xy(p.alpha, p.beta, z.x, z.y))


def jacobian(p: Params, z: PlanePoint) -> Jacobian2:
    return Jacobian2(*(float(a) for a in jacobian_xy(p.alpha, p.beta, z.x, z.y)))


_SYMMETRIES = {
    Symmetry.S1: lambda x, y: (-x, y),
    Symmetry.S2: lambda x, y: (x, -y),
    Symmetry.S: lambda x, y: (-x, -y),
    Symmetry.D: lambda x, y: (y, x),
    Symmetry.R: lambda x, y: (-y, x),
    Symmetry.T1: lambda x, y: (x + 0.5, y),
    Symmetry.T2: lambda x, y: (x, y + 0.5),
}


def apply_symmetry(sym: Symmetry, z: PlanePoint) -> PlanePoint:
    return _point(*_SYMMETRIES[Symmetry(sym)](z.x, z.y))


REVERSORS = ("H_S1", "H_S2", "S1_V", "S2_V")


def apply_reversor(p: Params, name: str, z: PlanePoint) -> PlanePoint:
    """One of the four involutions G with F o G = G o F^-1."""
    if name == "H_S1":
        return shear_h(p, apply_symmetry(Symmetry.S1, z))
    if name == "H_S2":
        return shear_h(p, apply_symmetry(Symmetry.S2, z))
    if name == "S1_V":
        return apply_symmetry(Symmetry.S1, shear_v(p, z))
    if name == "S2_V":
        return apply_symmetry(Symmetry.S2, shear_v(p, z))
    raise ValueError(f"unknown reversor {name!r}")


def eigen_2x2(j: Jacobian2) -> tuple[tuple[complex, complex], tuple[tuple[float, float], ...]]:
    """Eigenvalues (ascending modulus when real) and unit eigenvectors of j."""
    tr = j.trace
    det = j.det
    disc = tr * tr / 4.0 - det
    if disc >= 0:
        root = math.sqrt(disc)
        # larger-modulus root first, the other from the determinant
        big = tr / 2.0 + math.copysign(root, tr) if tr != 0 else root
        small = det / big if big != 0 else -root
        lams = (complex(small), complex(big)) if abs(small) <= abs(big) else (complex(big), complex(small))
        vectors = tuple(_eigenvector(j, lam.real) for lam in lams)
        return lams, vectors
    root = cmath.sqrt(disc)
    return (tr / 2.0 - root, tr / 2.0 + root), ()


def _eigenvector(j: Jacobian2, lam: float) -> tuple[float, float]:
    # rows of (J - lam) are orthogonal to the eigenvector; use the larger one
    r1 = (j.a11 - lam, j.a12)
    r2 = (j.a21, j.a22 - lam)
    row = r1 if math.hypot(*r1) >= math.hypot(*r2) else r2
    v = (-row[1], row[0])
    n = math.hypot(*v)
    if n == 0:
        return (1.0, 0.0)
    return (v[0] / n, v[1] / n)


def classify_eigenvalues(lams: tuple[complex, complex], tol: float = EIGEN_TOL) -> FixedPointKind:
    if any(abs(lam - 1.0) < tol for lam in lams):
        return FixedPointKind.NON_ELEMENTARY
    real = all(abs(lam.imag) <= tol * max(1.0, abs(lam)) for lam in lams)
    on_circle = all(abs(abs(lam) - 1.0) < tol for lam in lams)
    if real and not on_circle:
        return FixedPointKind.HYPERBOLIC
    if not real and on_circle:
        return FixedPointKind.ELLIPTIC
    return FixedPointKind.PARABOLIC


FIXED_POINTS = (
    PlanePoint(0.0, 0.0),
    PlanePoint(0.0, 0.5),
    PlanePoint(0.5, 0.0),
    PlanePoint(0.5, 0.5),
)


def fixed_points(p: Params) -> list[FixedPointReport]:
    if p.alpha * p.beta == 0:
        raise DegenerateParams(
            f"alpha*beta = 0 at {p}: fixed points are not isolated"
        )
    reports = []
    for z in FIXED_POINTS:
        j = jacobian(p, z)
        lams, vectors = eigen_2x2(j)
        reports.append(
            FixedPointReport(
                location=z,
                eigenvalues=lams,
                eigenvectors=vectors,
                classification=classify_eigenvalues(lams),
            )
        )
    return reports


def origin_eigenvalues(p: Params) -> tuple[float, float]:
    """Closed-form eigenvalues of DF at (0,0) and (1/2,1/2), for alpha*beta > 0."""
    ab = p.alpha * p.beta
    root = 2.0 * math.pi * math.sqrt(ab * (math.pi**2 * ab + 1.0))
    return 2.0 * math.pi**2 * ab - root + 1.0, 2.0 * math.pi**2 * ab + root + 1.0
