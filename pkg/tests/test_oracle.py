import itertools
from dataclasses import replace

import numpy as np
import pytest

from elid_planner.config import load_scenario
from elid_planner.geometry import CoverageFootprint, Placement, footprints
from elid_planner.objective import effective_coverage, evaluate_batch, fitness
from elid_planner.oracle import GridTooLarge, RasterConfig, grid_search, raster_coverage

from conftest import DATA


def full_fp():
    return CoverageFootprint(0.1, 600, 700, 41.2, 1.0, 1.0, 0.0, 1000.0)


def test_raster_no_units(road):
    assert raster_coverage([], [], road) == 0


@pytest.mark.parametrize("mode", ["columns", "2d"])
def test_raster_full_coverage(road, mode):
    res = 0.05 if mode == "columns" else 0.1
    c = raster_coverage([full_fp()], [Placement(500, 30)], road, raster=RasterConfig(res, mode))
    assert c == pytest.approx(0.829, abs=1e-3)


def test_raster_config_validation():
    with pytest.raises(ValueError):
        RasterConfig(0)
    with pytest.raises(ValueError):
        RasterConfig(0.1, "3d")


def test_raster_modes_agree_on_partial_widths(table1):
    ps = [Placement(100, 15.2), Placement(500, 15.0), Placement(800, 40, 0)]
    fps = footprints(table1.lidar, table1.road, ps)
    fps = [replace(fps[0], l_width=7.3)] + fps[1:]
    a = raster_coverage(fps, ps, table1.road, raster=RasterConfig(0.1))
    b = raster_coverage(fps, ps, table1.road, raster=RasterConfig(0.1, "2d"))
    assert a == pytest.approx(b, abs=1e-3)
    assert a == pytest.approx(effective_coverage(fps, ps, table1.road), abs=1e-3)


def test_raster_error_shrinks_with_resolution(table1):
    rng = np.random.default_rng(2)
    ps = [Placement(rng.uniform(0, 1000), rng.uniform(15, 50)) for _ in range(6)]
    fps = footprints(table1.lidar, table1.road, ps)
    exact = effective_coverage(fps, ps, table1.road)
    errs = [abs(raster_coverage(fps, ps, table1.road, raster=RasterConfig(r)) - exact)
            for r in (2.0, 0.5, 0.05)]
    assert errs[2] <= 1e-3 and errs[2] <= errs[0]


def test_raster_equivalence_hundred_layouts(table1):
    rng = np.random.default_rng(1234)
    worst = 0.0
    for _ in range(100):
        m = int(rng.integers(1, 21))
        ps = [Placement(rng.uniform(0, 1000), rng.uniform(15, 50), int(rng.random() < 0.5)) for _ in range(m)]
        fps = footprints(table1.lidar, table1.road, ps)
        worst = max(worst, abs(effective_coverage(fps, ps, table1.road)
                               - raster_coverage(fps, ps, table1.road)))
    assert worst <= 1e-3


def small(table1, **kw):
    road = replace(table1.road, d_road=100.0, z_min=15.0, z_max=17.0, sector_ends=(100.0,),
                   sector_scores=(1.0,))
    return replace(table1, road=road, num_elids=1, **kw)


def test_grid_expensive_units_stay_off(table1):
    placements, f = grid_search(small(table1, lam=2.0), 1.0, 0.5)
    assert f == 0 and placements[0].placed == 0


def test_grid_prefers_interior(table1):
    road = replace(table1.road, sector_ends=(1000.0,), sector_scores=(1.0,))
    cfg = replace(table1, road=road, lam=0.0, num_elids=1)
    placements, f = grid_search(cfg, 5.0, 5.0)
    p = placements[0]
    fp = footprints(cfg.lidar, road, placements)[0]
    assert p.placed == 1
    assert fp.x_start >= 0 and fp.x_end <= 1000
    assert 2 * fp.l_near < 1000
    assert p.x - fp.l_near >= -1e-9 and p.x + fp.l_near <= 1000 + 1e-9


def test_grid_is_exhaustive(table1):
    cfg = small(table1, lam=0.1)
    placements, f = grid_search(cfg, 5.0, 1.0)
    rng = np.random.default_rng(0)
    xs, zs = np.arange(0, 101, 5.0), np.array([15.0, 16.0, 17.0])
    for _ in range(200):
        cand = [Placement(float(rng.choice(xs)), float(rng.choice(zs)), int(rng.integers(0, 2)))]
        assert f <= fitness(cand, cfg).fitness


def test_grid_two_units_symmetric(table1):
    cfg = replace(small(table1, lam=0.1), num_elids=2)
    placements, f = grid_search(cfg, 10.0, 1.0)
    swapped = placements[::-1]
    assert fitness(swapped, cfg).fitness == pytest.approx(f, abs=1e-12)
    # brute force over a coarser product grid agrees
    per = list(itertools.product(np.arange(0, 101, 10.0), [15.0, 16.0, 17.0], [0.0, 1.0]))
    rows = np.array([a + b for a, b in itertools.product(per, per)])
    brute = evaluate_batch(rows[:, 0::3], rows[:, 1::3], rows[:, 2::3], cfg)["fitness"].min()
    assert f == brute


def test_grid_guard(table1):
    with pytest.raises(GridTooLarge):
        grid_search(table1, 1.0, 0.5)
    with pytest.raises(GridTooLarge):
        grid_search(replace(table1, num_elids=2), 1.0, 0.5)


def test_grid_small_m2_within_guard():
    cfg = load_scenario(DATA / "small_m2.json")
    placements, f = grid_search(cfg, 1.0, 0.5)
    assert len(placements) == 2 and f < 0
