import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from kicked_harper.core import (
    REVERSORS,
    apply_reversor,
    apply_symmetry,
    classify_eigenvalues,
    eigen_2x2,
    fixed_points,
    jacobian,
    lift_f,
    lift_f_inv,
    lift_g,
    origin_eigenvalues,
    shear_h,
    shear_v,
    sin2pi,
)
from kicked_harper.errors import DegenerateParams
from kicked_harper.models import FixedPointKind, Params, PlanePoint, Symmetry

# Settings
seed = 0
nruns = 10_000

rng = np.random.default_rng(seed)
pairs = [
    (Params(*rng.uniform(-3, 3, 2)), PlanePoint(*rng.uniform(-2, 2, 2)))
    for _ in range(nruns)
]


def close(a: PlanePoint, b: PlanePoint, tol: float) -> bool:
    return math.hypot(a.x - b.x, a.y - b.y) < tol


@pytest.mark.parametrize(
    "alpha,z,expected",
    [
        (1.0, (0.0, 0.25), (1.0, 0.25)),
        (0.0, (0.3, 0.7), (0.3, 0.7)),
        (0.5, (0.0, 1 / 12), (0.25, 1 / 12)),
    ],
)
def test_shear_h(alpha, z, expected):
    out = shear_h(Params(alpha, 0.0), PlanePoint(*z))
    assert_allclose((out.x, out.y), expected, atol=1e-15)


@pytest.mark.parametrize(
    "beta,z,expected",
    [
        (1.0, (0.25, 0.0), (0.25, 1.0)),
        (0.0, (0.3, 0.7), (0.3, 0.7)),
        (2.0, (1 / 12, 0.0), (1 / 12, 1.0)),
    ],
)
def test_shear_v(beta, z, expected):
    out = shear_v(Params(0.0, beta), PlanePoint(*z))
    assert_allclose((out.x, out.y), expected, atol=1e-15)


def test_lift_examples():
    p = Params(1.0, 1.0)
    out = lift_f(p, PlanePoint(0.25, 0.25))
    assert_allclose((out.x, out.y), (1.25, 1.25), atol=1e-15)
    out = lift_g(p, PlanePoint(0.25, 0.25))
    assert_allclose((out.x, out.y), (1.25, 1.25), atol=1e-15)
    out = lift_g(Params(1.0, 0.0), PlanePoint(0.0, 0.25))
    assert_allclose((out.x, out.y), (1.0, 0.25), atol=1e-15)
    back = lift_f_inv(p, PlanePoint(1.25, 1.25))
    assert_allclose((back.x, back.y), (0.25, 0.25), atol=1e-15)
    assert lift_f(Params(0.0, 0.0), PlanePoint(0.3, -0.8)) == PlanePoint(0.3, -0.8)
    assert lift_f(Params(2.7, -1.3), PlanePoint(0.0, 0.0)) == PlanePoint(0.0, 0.0)


def test_f_is_h_after_v():
    for p, z in pairs[:50]:
        assert close(lift_f(p, z), shear_h(p, shear_v(p, z)), 1e-14)


def test_inverse_round_trip():
    for p, z in pairs:
        assert close(lift_f(p, lift_f_inv(p, z)), z, 1e-12)


def test_sin2pi_reduction_far_from_origin():
    x = 0.125 + 1e9
    assert abs(sin2pi(x) - math.sqrt(0.5)) < 1e-6


@pytest.mark.parametrize("name", REVERSORS)
def test_reversors(name):
    for p, z in pairs:
        g = apply_reversor(p, name, z)
        assert close(apply_reversor(p, name, g), z, 1e-10)
        assert close(lift_f(p, g), apply_reversor(p, name, lift_f_inv(p, z)), 1e-10)


def test_unknown_reversor():
    with pytest.raises(ValueError):
        apply_reversor(Params(1, 1), "V_H", PlanePoint(0, 0))


def test_symmetry_relations():
    for p, z in pairs:
        a, b = p.alpha, p.beta
        # odd symmetry
        assert close(lift_f(p, -z), -lift_f(p, z), 1e-12)
        # reflections
        assert close(
            lift_f(p, apply_symmetry(Symmetry.S1, z)),
            apply_symmetry(Symmetry.S1, lift_f(Params(-a, -b), z)),
            1e-10,
        )
        assert close(
            lift_f(p, apply_symmetry(Symmetry.S2, z)),
            apply_symmetry(Symmetry.S2, lift_f(Params(-a, -b), z)),
            1e-10,
        )
        # diagonal and rotation
        assert close(
            lift_f(p, apply_symmetry(Symmetry.D, z)),
            apply_symmetry(Symmetry.D, lift_f_inv(Params(-b, -a), z)),
            1e-10,
        )
        assert close(
            lift_f(p, apply_symmetry(Symmetry.R, z)),
            apply_symmetry(Symmetry.R, lift_f_inv(Params(b, a), z)),
            1e-10,
        )
        # half translations
        assert close(
            lift_f(p, apply_symmetry(Symmetry.T1, z)),
            apply_symmetry(Symmetry.T1, lift_f(Params(a, -b), z)),
            1e-12,
        )
        assert close(
            lift_f(p, apply_symmetry(Symmetry.T2, z)),
            apply_symmetry(Symmetry.T2, lift_f(Params(-a, b), z)),
            1e-12,
        )


def test_integer_equivariance():
    for p, z in pairs[:100]:
        fz = lift_f(p, z)
        for v in [(1, 0), (0, 1), (-3, 7), (10, -10)]:
            shifted = lift_f(p, PlanePoint(z.x + v[0], z.y + v[1]))
            assert_allclose((shifted.x - fz.x, shifted.y - fz.y), v, atol=1e-12)


@pytest.mark.parametrize(
    "sym,z,expected",
    [
        (Symmetry.S1, (0.3, 0.4), (-0.3, 0.4)),
        (Symmetry.S2, (0.3, 0.4), (0.3, -0.4)),
        (Symmetry.S, (0.3, 0.4), (-0.3, -0.4)),
        (Symmetry.D, (0.1, 0.2), (0.2, 0.1)),
        (Symmetry.R, (0.1, 0.2), (-0.2, 0.1)),
        (Symmetry.T1, (0.75, 0.0), (1.25, 0.0)),
        (Symmetry.T2, (0.0, 0.75), (0.0, 1.25)),
    ],
)
def test_apply_symmetry(sym, z, expected):
    out = apply_symmetry(sym, PlanePoint(*z))
    assert (out.x, out.y) == expected


def test_jacobian_at_origin():
    a, b = 0.7, -1.3
    j = jacobian(Params(a, b), PlanePoint(0.0, 0.0))
    expected = [[4 * math.pi**2 * a * b + 1, 2 * math.pi * a], [2 * math.pi * b, 1]]
    assert_allclose(j.as_array(), expected, rtol=1e-14)
    assert_allclose(jacobian(Params(0, 0), PlanePoint(0.3, 0.9)).as_array(), np.eye(2))


def test_jacobian_determinant_and_finite_differences():
    h = 1e-6
    for p, z in pairs[:200]:
        j = jacobian(p, z)
        assert abs(j.det - 1.0) < 1e-12 * max(1.0, abs(j.a11))
        fd = np.empty((2, 2))
        for col, (dx, dy) in enumerate([(h, 0.0), (0.0, h)]):
            plus = lift_f(p, PlanePoint(z.x + dx, z.y + dy))
            minus = lift_f(p, PlanePoint(z.x - dx, z.y - dy))
            fd[:, col] = [(plus.x - minus.x) / (2 * h), (plus.y - minus.y) / (2 * h)]
        assert_allclose(j.as_array(), fd, atol=1e-5 * max(1.0, abs(j.a11)))


def test_fixed_points_at_one_one():
    reports = fixed_points(Params(1.0, 1.0))
    assert [(r.location.x, r.location.y) for r in reports] == [(0, 0), (0, 0.5), (0.5, 0), (0.5, 0.5)]
    lam2 = 2 * math.pi**2 + 2 * math.pi * math.sqrt(math.pi**2 + 1) + 1
    origin = reports[0]
    assert_allclose(origin.eigenvalues[1].real, lam2, rtol=1e-12)
    assert origin.classification is FixedPointKind.HYPERBOLIC
    assert reports[1].classification is FixedPointKind.HYPERBOLIC
    for r in reports:
        lam1, lam2 = r.eigenvalues
        assert abs(lam1 * lam2 - 1.0) < 1e-10


def test_fixed_points_small_params_elliptic():
    reports = fixed_points(Params(0.01, 0.01))
    assert reports[1].classification is FixedPointKind.ELLIPTIC
    assert reports[2].classification is FixedPointKind.ELLIPTIC
    assert reports[1].eigenvectors == ()


def test_fixed_points_degenerate():
    with pytest.raises(DegenerateParams):
        fixed_points(Params(0.0, 1.0))


def test_fixed_point_closed_forms():
    local = np.random.default_rng(1)
    for _ in range(100):
        a, b = local.uniform(0.1, 1.4, 2) * local.choice([-1, 1])
        p = Params(a, b)
        reports = fixed_points(p)
        ab = a * b
        for r in reports[1:3]:
            lam1, lam2 = r.eigenvalues
            assert_allclose((lam1 + lam2).real, 2 - 4 * math.pi**2 * ab, rtol=1e-10, atol=1e-12)
        small, big = origin_eigenvalues(p)
        lam1, lam2 = reports[0].eigenvalues
        assert_allclose([lam1.real, lam2.real], [small, big], rtol=1e-10)


def test_eigenvectors():
    j = jacobian(Params(1.0, 1.0), PlanePoint(0.0, 0.0))
    lams, vectors = eigen_2x2(j)
    for lam, v in zip(lams, vectors):
        assert_allclose(j.as_array() @ np.array(v), lam.real * np.array(v), atol=1e-9 * abs(lam))
        assert_allclose(np.hypot(*v), 1.0)


def test_classify_eigenvalues():
    assert classify_eigenvalues((1.0 + 0j, 1.0 + 0j)) is FixedPointKind.NON_ELEMENTARY
    assert classify_eigenvalues((0.5 + 0j, 2.0 + 0j)) is FixedPointKind.HYPERBOLIC
    assert classify_eigenvalues((-0.5 + 0j, -2.0 + 0j)) is FixedPointKind.HYPERBOLIC
    root = complex(math.cos(0.3), math.sin(0.3))
    assert classify_eigenvalues((root, root.conjugate())) is FixedPointKind.ELLIPTIC
    assert classify_eigenvalues((-1.0 + 0j, -1.0 + 0j)) is FixedPointKind.PARABOLIC
