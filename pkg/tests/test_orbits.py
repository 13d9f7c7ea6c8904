from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from kicked_harper.core import lift_f
from kicked_harper.models import Params, PlanePoint
from kicked_harper.orbits import (
    detect_half_line_crossing,
    exact_rotations,
    iterate_inverse,
    iterate_orbit,
    iterate_stats,
    mean_rotation_vector,
    orbit_stats_batch,
    periodic_construction,
)


def test_iterate_stats_bounds():
    p = Params(0.8, -0.6)
    seed = PlanePoint(0.1, 0.3)
    prev = iterate_stats(p, seed, 10)
    for n in (50, 200, 1000):
        stats = iterate_stats(p, seed, n)
        assert stats.dx_max >= prev.dx_max and stats.dy_max >= prev.dy_max
        assert abs(stats.birkhoff[0]) <= abs(p.alpha) + 1e-12
        assert abs(stats.birkhoff[1]) <= abs(p.beta) + 1e-12
        prev = stats


def test_iterate_stats_rejects_zero():
    with pytest.raises(ValueError):
        iterate_stats(Params(1, 1), PlanePoint(0, 0), 0)


def test_iterate_orbit_matches_stats():
    p = Params(1.3, 0.4)
    seed = PlanePoint(0.2, 0.7)
    orbit = iterate_orbit(p, seed, 100)
    assert orbit.shape == (101, 2)
    assert tuple(orbit[0]) == (0.2, 0.7)
    z1 = lift_f(p, seed)
    assert_allclose(orbit[1], (z1.x, z1.y))
    stats = iterate_stats(p, seed, 100)
    assert_allclose((orbit[-1] - orbit[0]) / 100, stats.birkhoff)
    assert_allclose(np.abs(orbit[:, 0] - 0.2).max(), stats.dx_max)


def test_iterate_inverse_round_trip():
    p = Params(0.3, 0.2)
    seed = PlanePoint(0.11, 0.37)
    forward = iterate_orbit(p, seed, 5)[-1]
    back = iterate_inverse(p, PlanePoint(*forward), 5)
    assert_allclose((back.x, back.y), (seed.x, seed.y), atol=1e-10)


def test_orbit_stats_batch_identity():
    x, y, dx, dy = orbit_stats_batch(0.0, 0.0, np.array([0.1, 0.2]), np.array([0.3, 0.4]), 5)
    assert_allclose(x, [0.1, 0.2])
    assert_allclose(dx, 0.0)
    assert_allclose(dy, 0.0)


def test_crossing_vertical():
    hit = detect_half_line_crossing(Params(1.0, 1.0), PlanePoint(0.25, 0.0), 10)
    assert hit is not None
    assert hit.displacement == (0, 2)
    assert hit.period == 2
    assert hit.vector == (Fraction(0), Fraction(1))


def test_crossing_horizontal_axis():
    hit = detect_half_line_crossing(Params(1.0, 1.0), PlanePoint(0.0, 0.25), 10, axis="x")
    assert hit is not None
    assert hit.displacement == (2, 0)
    assert hit.as_floats() == (1.0, 0.0)


def test_crossing_none_for_identity():
    assert detect_half_line_crossing(Params(0.0, 0.0), PlanePoint(0.3, 0.0), 50) is None


def test_crossing_errors():
    with pytest.raises(ValueError):
        detect_half_line_crossing(Params(1, 1), PlanePoint(0.25, 0.1), 10)
    with pytest.raises(ValueError):
        detect_half_line_crossing(Params(1, 1), PlanePoint(0.25, 0.0), 10, axis="z")


def test_periodic_construction_one_one():
    p = Params(1.0, 1.0)
    found = periodic_construction(p, 1)
    vectors = {r.vector for r in found}
    for sx in (-1, 1):
        for sy in (-1, 1):
            assert (Fraction(sx), Fraction(sy)) in vectors
    assert (Fraction(1, 2), Fraction(0)) in vectors
    assert (Fraction(0), Fraction(-1, 2)) in vectors
    for r in found:
        z = iterate_orbit(p, r.witness, r.period)[-1]
        assert_allclose(z, (r.witness.x + r.displacement[0], r.witness.y + r.displacement[1]), atol=1e-8)


def test_periodic_construction_half_orbit():
    found = periodic_construction(Params(0.5, 0.3), 1)
    assert len(found) == 2
    up = found[0]
    assert up.witness.x == 0.0
    assert_allclose(up.witness.y, 0.25)
    assert up.as_floats() == (0.5, 0.0)


def test_periodic_construction_nothing_small():
    assert periodic_construction(Params(0.3, 0.3), 1) == []


def test_exact_rotations_identity():
    assert exact_rotations(Params(0.0, 0.0), n_max=50) == []


@pytest.mark.parametrize(
    "alpha,beta",
    [(0.3, 0.7), (1.0, 1.0), (-2.5, 0.4), (5.0, 3.0)],
)
def test_mean_rotation_vanishes(alpha, beta):
    assert_allclose(mean_rotation_vector(Params(alpha, beta)), (0.0, 0.0), atol=1e-12)


def test_mean_rotation_grid_validated():
    with pytest.raises(ValueError):
        mean_rotation_vector(Params(1, 1), grid=1)


def test_iterate_stats_unit_kicks():
    stats = iterate_stats(Params(1.0, 1.0), PlanePoint(0.25, 0.25), 10)
    assert stats.dx_max == pytest.approx(10.0)
    assert stats.dy_max == pytest.approx(10.0)
    assert_allclose(stats.birkhoff, (1.0, 1.0))


def test_iterate_stats_vertical_climb():
    stats = iterate_stats(Params(0.0, 0.5), PlanePoint(0.25, 0.0), 100)
    assert stats.dy_max == pytest.approx(50.0)
    assert stats.dx_max == 0.0
    assert_allclose(stats.birkhoff, (0.0, 0.5))


def test_crossing_half_step():
    hit = detect_half_line_crossing(Params(0.0, 0.5), PlanePoint(0.25, 0.0), 10)
    assert hit is not None
    assert hit.displacement == (0, 1)
    assert hit.period == 2
    assert hit.vector == (Fraction(0), Fraction(1, 2))


def test_periodic_construction_only_horizontal_halves():
    found = periodic_construction(Params(0.6, 0.1), 1)
    assert {r.vector for r in found} == {(Fraction(1, 2), Fraction(0)), (Fraction(-1, 2), Fraction(0))}


@pytest.mark.parametrize("alpha,beta", [(0.1, 0.1), (0.3, 0.2), (-0.2, 0.25)])
def test_inverse_reverses_orbits(alpha, beta):
    p = Params(alpha, beta)
    rng = np.random.default_rng(3)
    for x, y in rng.random((5, 2)):
        end = iterate_orbit(p, PlanePoint(x, y), 5)[-1]
        back = iterate_inverse(p, PlanePoint(*end), 5)
        assert_allclose((back.x, back.y), (x, y), atol=1e-10)


def test_stats_odd_under_point_reflection():
    rng = np.random.default_rng(11)
    x0, y0 = rng.random(16), rng.random(16)
    x, y, dx, dy = orbit_stats_batch(0.9, -0.7, x0, y0, 500)
    xm, ym, dxm, dym = orbit_stats_batch(0.9, -0.7, -x0, -y0, 500)
    assert_allclose(xm, -x, atol=1e-12)
    assert_allclose(ym, -y, atol=1e-12)
    assert_allclose(dxm, dx, atol=1e-12)
    assert_allclose(dym, dy, atol=1e-12)


@pytest.mark.parametrize("alpha,beta", [(0.8, -0.6), (2.3, 1.7), (0.05, 3.0)])
def test_steps_bounded_by_kicks(alpha, beta):
    rng = np.random.default_rng(5)
    for x, y in rng.random((4, 2)):
        steps = np.abs(np.diff(iterate_orbit(Params(alpha, beta), PlanePoint(x, y), 200), axis=0))
        assert steps[:, 0].max() <= abs(alpha) + 1e-12
        assert steps[:, 1].max() <= abs(beta) + 1e-12
