import csv
import io

import numpy as np
import pytest
from numpy.testing import assert_allclose

from kicked_harper.constants import BETA_PLUS_CONSTANT, CSV_HEADER
from kicked_harper.diffusion import (
    classify_orbits,
    classify_pixel,
    default_seeds,
    estimate_beta_minus_upper,
    pixel_centers,
    pixel_seed,
    render,
    replay_pixel,
    scan,
    to_csv,
    to_pgm,
    to_ppm,
    write_image,
)
from kicked_harper.errors import UpperEndpointNotDiffusive
from kicked_harper.models import Budget, Params, PixelVerdict, ScanGrid, Shape, Verdict
from kicked_harper.rotset import approx_rotation_set, shape_classify

small = Budget(4, 300)


def verdict(alpha, beta, detected, dx=0.0, dy=0.0) -> PixelVerdict:
    return PixelVerdict(
        params=Params(alpha, beta),
        verdict=Verdict.N_DETECTED if detected else Verdict.E_PRESUMED,
        dx_max=dx,
        dy_max=dy,
        iterations_used=10,
        seeds_used=1,
    )


def test_pixel_seed():
    assert pixel_seed(42, 3, 5) == pixel_seed(42, 3, 5)
    assert pixel_seed(42, 3, 5) != pixel_seed(42, 5, 3)
    assert pixel_seed(42, 0, 0) != pixel_seed(43, 0, 0)
    assert 0 <= pixel_seed(0, 0, 0) < 2**64


def test_default_seeds():
    seeds = default_seeds(8, 0)
    assert seeds.shape == (8, 2)
    assert tuple(seeds[0]) == (0.25, 0.25)
    assert np.all((seeds >= 0) & (seeds < 1))
    assert_allclose(default_seeds(8, 0), seeds)


def test_identity_is_not_detected():
    v = classify_pixel(Params(0.0, 0.0), n_seeds=4, n_iters=100)
    assert v.verdict is Verdict.E_PRESUMED
    assert v.dx_max == 0.0 and v.dy_max == 0.0
    assert v.iterations_used == 100
    assert v.witness_x is None and v.witness_y is None


def test_one_one_detected_immediately():
    v = classify_pixel(Params(1.0, 1.0), n_seeds=4, n_iters=1000)
    assert v.detected
    assert v.iterations_used == 1
    assert (v.witness_x.x, v.witness_x.y) == (0.25, 0.25)
    assert (v.witness_y.x, v.witness_y.y) == (0.25, 0.25)


def test_vertical_only_needs_flag():
    # alpha = 0: orbits only move vertically
    seeds = np.array([[0.25, 0.0]])
    v = classify_orbits(Params(0.0, 1.0), seeds, 10)
    assert not v.detected
    assert v.dy_max >= 1.0
    v = classify_orbits(Params(0.0, 1.0), seeds, 10, need_x=False)
    assert v.detected


def test_classify_rejects_bad_budget():
    with pytest.raises(ValueError):
        classify_pixel(Params(1, 1), n_seeds=0)
    with pytest.raises(ValueError):
        classify_pixel(Params(1, 1), n_iters=0)


def test_replay_is_bit_identical():
    v = classify_pixel(Params(0.7, 0.35), n_seeds=6, n_iters=2000, rng_seed=11)
    assert replay_pixel(v, 11, 2000) == v


def test_pixel_centers():
    assert_allclose(pixel_centers(0.0, 1.0, 4), [0.125, 0.375, 0.625, 0.875])
    assert_allclose(pixel_centers(2.0, 2.0, 3), [2.0, 2.0, 2.0])


def test_scan_rejects_empty_range():
    with pytest.raises(ValueError):
        scan((1.0, 0.0), (0.0, 1.0), (2, 2), small)
    with pytest.raises(ValueError):
        scan((0.0, 1.0), (0.0, 1.0), (0, 2), small)


def test_scan_layout_and_threads():
    a = scan((0.0, 1.2), (0.0, 0.9), (3, 2), small, rng_seed=5, threads=1)
    b = scan((0.0, 1.2), (0.0, 0.9), (3, 2), small, rng_seed=5, threads=4)
    assert a == b
    assert len(a.verdicts) == 6
    assert_allclose(a.at(2, 1).params.alpha, 1.0)
    assert_allclose(a.at(2, 1).params.beta, 0.675)
    assert a.detected_mask().shape == (2, 3)
    assert sum(a.counts().values()) == 6


def test_detections_replay_sound():
    rng = np.random.default_rng(7)
    for k in range(100):
        p = Params(*rng.uniform(0.0, 1.5, 2))
        v = classify_pixel(p, n_seeds=4, n_iters=500, rng_seed=k)
        if not v.detected:
            continue
        assert v.witness_x is not None and v.witness_y is not None
        assert v.dx_max >= 1.0 and v.dy_max >= 1.0
        assert replay_pixel(v, k, 500) == v


def test_render_orientation_and_colours():
    grid = ScanGrid(
        alpha_range=(0.0, 1.0),
        beta_range=(0.0, 1.0),
        resolution=(2, 2),
        verdicts=(
            verdict(0.25, 0.25, False, dx=0.5),
            verdict(0.75, 0.25, False, dy=2.0),
            verdict(0.25, 0.75, False, dx=0.1, dy=0.2),
            verdict(0.75, 0.75, True, dx=3, dy=3),
        ),
    )
    img = render(grid)
    assert img.shape == (2, 2, 3) and img.dtype == np.uint8
    # bottom row is the smallest beta
    assert tuple(img[1, 0]) == (127, 0, 0)
    assert tuple(img[1, 1]) == (255, 0, 0)
    assert tuple(img[0, 0]) == (25, 0, 0)
    assert tuple(img[0, 1]) == (255, 255, 255)


def test_scan_grid_checks_length():
    with pytest.raises(ValueError):
        ScanGrid((0, 1), (0, 1), (2, 2), (verdict(0, 0, False),))


def test_image_encodings(tmp_path):
    img = np.zeros((1, 2, 3), dtype=np.uint8)
    img[0, 1] = (255, 10, 20)
    assert to_pgm(img) == b"P5\n2 1\n255\n\x00\xff"
    assert to_ppm(img) == b"P6\n2 1\n255\n\x00\x00\x00\xff\x0a\x14"
    write_image(tmp_path / "a.pgm", img)
    write_image(tmp_path / "a.ppm", img)
    assert (tmp_path / "a.pgm").read_bytes().startswith(b"P5")
    assert (tmp_path / "a.ppm").read_bytes().startswith(b"P6")


def test_csv_round_trip_digits():
    grid = ScanGrid((0, 1), (0, 1), (1, 1), (verdict(0.1, 1 / 3, False, dx=2 / 3),))
    rows = list(csv.reader(io.StringIO(to_csv(grid))))
    assert tuple(rows[0]) == CSV_HEADER
    assert float(rows[1][1]) == 1 / 3
    assert float(rows[1][3]) == 2 / 3
    assert rows[1][2] == "EPresumed"
    tagged = ScanGrid((0, 1), (0, 1), (1, 1), grid.verdicts, map_tag="nontwist")
    rows = list(csv.reader(io.StringIO(to_csv(tagged))))
    assert rows[0][-1] == "map" and rows[1][-1] == "nontwist"


def test_beta_minus_upper_is_verified():
    est = estimate_beta_minus_upper(1.0, 0.0, 1.0, bisection_steps=4, budget=Budget(4, 2000))
    assert 0 < est.beta_minus_upper <= 1.0
    assert len(est.steps) == 5
    assert est.budget > 0
    assert classify_pixel(Params(1.0, est.beta_minus_upper), 4, 2000).detected


def test_beta_minus_upper_errors():
    with pytest.raises(ValueError):
        estimate_beta_minus_upper(0.4, 0.0, 1.0)
    with pytest.raises(ValueError):
        estimate_beta_minus_upper(1.0, 0.5, 0.5)
    with pytest.raises(UpperEndpointNotDiffusive):
        estimate_beta_minus_upper(1.0, 0.0, 1e-6, budget=Budget(2, 100))


@pytest.mark.slow
def test_unit_square_corner_all_detected():
    grid = scan((0.5, 1.0), (0.5, 1.0), (8, 8), Budget(32, 100_000), rng_seed=0)
    assert grid.counts()["NDetected"] == 64


@pytest.mark.slow
@pytest.mark.parametrize("alpha", [4.0, 16.0, 64.0])
def test_beta_minus_scaling(alpha):
    bound = BETA_PLUS_CONSTANT / np.sqrt(alpha)
    try:
        est = estimate_beta_minus_upper(alpha, 0.0, bound)
        ceiling = bound
    except UpperEndpointNotDiffusive:
        est = estimate_beta_minus_upper(alpha, 0.0, 1.1 * bound)
        ceiling = 1.1 * bound
    assert est.beta_minus_upper <= ceiling
    assert est.budget <= 10_000_000
    assert classify_pixel(Params(alpha, est.beta_minus_upper), 16, 40_000).detected


@pytest.mark.parametrize("alpha,beta", [(0.1, 0.1), (0.7, 0.6), (0.9, 0.3), (1.5, 1.2)])
def test_verdict_invariant_under_half_shift(alpha, beta):
    # F_{a,b}(x + 1/2, y) = F_{a,-b}(x, y) + (1/2, 0)
    seeds = default_seeds(32, 0)
    shifted = seeds + np.array([0.5, 0.0])
    up = classify_orbits(Params(alpha, beta), shifted, 100_000)
    down = classify_orbits(Params(alpha, -beta), seeds, 100_000)
    assert up.verdict is down.verdict


@pytest.mark.parametrize("alpha,beta", [(1.0, 1.0), (1.5, 1.2), (0.7, 0.6)])
def test_detection_implies_full_rotation_set(alpha, beta):
    p = Params(alpha, beta)
    if classify_pixel(p, n_seeds=16, n_iters=20_000).detected:
        assert shape_classify(approx_rotation_set(p, n_orbits=64, n_iters=2000)) is Shape.FULL_DIM


@pytest.mark.parametrize("alpha,beta", [(1.0, 1.0), (0.8, 0.7), (0.6, 0.45)])
def test_detection_survives_larger_budget(alpha, beta):
    p = Params(alpha, beta)
    short = classify_pixel(p, n_seeds=8, n_iters=2000, rng_seed=4)
    long = classify_pixel(p, n_seeds=8, n_iters=20_000, rng_seed=4)
    if short.detected:
        assert long.detected
        assert long.iterations_used == short.iterations_used
        assert (long.witness_x, long.witness_y) == (short.witness_x, short.witness_y)
    assert long.dx_max >= short.dx_max or long.detected
