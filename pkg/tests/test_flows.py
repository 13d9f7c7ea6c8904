import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from kicked_harper.core import jacobian_xy
from kicked_harper.diffusion import classify_pixel
from kicked_harper.flows import (
    cusp_experiment,
    euler_convergence,
    euler_identity_check,
    euler_jacobian_chain,
    field_w,
    flow_xy,
    reference_flow,
    variational_flow,
)
from kicked_harper.models import FlowSpec, Params, PlanePoint


@pytest.mark.parametrize("lam", [0.0, 0.2, 0.5, 1.0])
def test_euler_identity(lam):
    rng = np.random.default_rng(1)
    for alpha in (0.01, 0.1, 0.7):
        spec = FlowSpec(lam, alpha)
        for z in rng.uniform(-1.0, 1.0, (20, 2)):
            assert euler_identity_check(spec, PlanePoint(*z)) < 1e-12


@pytest.mark.parametrize("alpha,n", [(0.1, 10), (0.3, 3), (0.02, 50), (1.0, 1), (0.0, 0)])
def test_n_alpha(alpha, n):
    assert FlowSpec(0.5, alpha).n_alpha == n


def test_field_w():
    assert field_w(FlowSpec(1.0, 0.0), PlanePoint(0.25, 0.0)) == (0.0, 1.0)
    w1, w2 = field_w(FlowSpec(0.0, 0.3), PlanePoint(0.0, 0.25))
    assert (w1, w2) == (1.0, 0.0)


def test_reference_flow_limits():
    spec = FlowSpec(0.5, 0.1)
    z = PlanePoint(0.2, 0.3)
    assert reference_flow(spec, 0.0, z) == z
    with pytest.raises(ValueError):
        reference_flow(spec, 1.5, z)
    with pytest.raises(ValueError):
        reference_flow(spec, 0.5, z, tol=1e-14)


def test_shear_flow_is_exact():
    x = np.array([0.1, 0.4])
    y = np.array([0.05, 0.7])
    fx, fy = flow_xy(0.0, 0.2, 0.75, x, y)
    assert_allclose(fx, x + 0.75 * np.sin(2 * np.pi * y), atol=1e-13)
    assert_allclose(fy, y)


def test_shear_variational_flow():
    y = np.array([0.05, 0.7])
    t = 0.6
    _, _, u = variational_flow(0.0, 0.2, t, np.array([0.1, 0.4]), y)
    assert u.shape == (2, 2, 2)
    assert_allclose(u[0, 0], 1.0)
    assert_allclose(u[1, 0], 0.0, atol=1e-14)
    assert_allclose(u[1, 1], 1.0)
    assert_allclose(u[0, 1], 2 * math.pi * np.cos(2 * math.pi * y) * t, atol=1e-12)


@pytest.mark.parametrize("lam", [0.3, 1.0])
def test_singularities_stay_fixed(lam):
    spec = FlowSpec(lam, 0.0)
    for x, y in [(0.0, 0.0), (0.5, 0.5), (0.0, 0.5), (0.5, 0.0)]:
        z = reference_flow(spec, 1.0, PlanePoint(x, y))
        assert_allclose((z.x, z.y), (x, y), atol=1e-12)


@pytest.mark.parametrize("lam", [0.2, 0.5, 1.0])
def test_time_one_map_preserves_area(lam):
    rng = np.random.default_rng(6)
    x, y = rng.random(16), rng.random(16)
    _, _, u = variational_flow(lam, 0.0, 1.0, x, y)
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    assert_allclose(det, 1.0, atol=1e-8)


def test_shear_euler_is_exact():
    report = euler_convergence(0.0, [0.02, 0.01, 0.005], sample=16)
    assert max(report.sup_errors_c0) < 1e-10
    x = np.array([0.1, 0.4, 0.85])
    y = np.array([0.05, 0.7, 0.33])
    ex, ey, _ = euler_jacobian_chain(0.0, 0.01, 100, x, y)
    assert_allclose(ex, x + np.sin(2 * np.pi * y), atol=1e-12)
    assert_allclose(ey, y)


def test_euler_chain_single_step():
    x = np.array([0.1, 0.6])
    y = np.array([0.3, 0.9])
    _, _, m = euler_jacobian_chain(0.5, 0.2, 1, x, y)
    a11, a12, a21, a22 = jacobian_xy(0.2, 0.1, x, y)
    assert_allclose(m[0, 0], a11)
    assert_allclose(m[0, 1], a12)
    assert_allclose(m[1, 0], a21)
    assert_allclose(m[1, 1], a22)


def test_euler_convergence_needs_three_steps():
    with pytest.raises(ValueError):
        euler_convergence(0.5, [0.1, 0.05])


def test_cusp_rejects_bad_lambda():
    with pytest.raises(ValueError):
        cusp_experiment(1.5, [0.1])


@pytest.mark.slow
def test_euler_first_order():
    report = euler_convergence(0.5, [0.02, 0.01, 0.005, 0.0025])
    assert 0.8 <= report.fitted_order <= 1.2
    assert 0.7 <= report.fitted_order_c1 <= 1.3
    assert list(report.sup_errors_c0) == sorted(report.sup_errors_c0, reverse=True)


@pytest.mark.slow
def test_cusp_below_and_on_diagonal():
    out = cusp_experiment(0.2, [0.02, 0.04, 0.06, 0.08, 0.1])
    assert all(row["verdict"] == "EPresumed" for row in out["rows"])
    assert out["threshold"] is None
    assert classify_pixel(Params(0.45, 0.45), 32, 100_000).detected
