"""Exit criteria for the planner, one test per criterion.

Each test appends a PASS/FAIL line (with the measured values) to the
"acceptance criteria" section of the pytest summary.
"""
import csv
import math
import statistics
import time

import numpy as np
import pytest

from elid_planner.cli import main, run_sweep
from elid_planner.config import GB, load_scenario
from elid_planner.datamodel import octree_density
from elid_planner.geometry import Placement, footprints
from elid_planner.objective import effective_coverage, partition, penalty
from elid_planner.oracle import RasterConfig, grid_search, raster_coverage
from elid_planner.solver import solve

from conftest import ACCEPTANCE_LINES, DATA

SEEDS = range(10)
FIXED_X = (125, 375, 625, 875)
FIXED_Z = 40
REPORTED_FIXED = 0.552
REPORTED_OPTIMISED = 0.570
TOL = 0.02
CEILING = 0.829


def record(n, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
    return ok


def report_values(text):
    out = {}
    sign = None
    for line in text.splitlines():
        if line.startswith("width sign: "):
            sign = line.split(": ")[1]
        elif line.startswith("coverage: ") or line.startswith("reported coverage: "):
            key, v = line.split(": ")
            out[sign, key] = float(v)
    return out


def test_1_fixed_layout_reproduction(tmp_path, capsys):
    layout = tmp_path / "fixed.csv"
    with open(layout, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "z", "placed"])
        w.writerows((x, FIXED_Z, 1) for x in FIXED_X)
    t0 = time.perf_counter()
    main(["evaluate", "tight_d9", "--placements", str(layout), "--both-signs"])
    elapsed = time.perf_counter() - t0
    vals = report_values(capsys.readouterr().out)
    hits = {k: v for k, v in vals.items() if abs(v - REPORTED_FIXED) <= TOL}
    ok = bool(hits) and elapsed < 1.0
    detail = ", ".join(f"{s}/{k}={v:.4f}" for (s, k), v in sorted(vals.items()))
    record(1, ok, f"target {REPORTED_FIXED}±{TOL}; {detail}; {elapsed:.3f}s")
    assert elapsed < 1.0
    assert hits, f"no width-sign interpretation lands within {TOL} of {REPORTED_FIXED}: {vals}"


def test_2_optimised_beats_fixed(tight_d9):
    covs = [solve(tight_d9.with_overrides(seed=s)).reported_coverage for s in SEEDS]
    med = statistics.median(covs)
    ok = med >= REPORTED_FIXED and abs(med - REPORTED_OPTIMISED) <= TOL
    record(2, ok, f"median coverage {med:.4f} over {len(covs)} seeds "
                  f"(need >= {REPORTED_FIXED} and {REPORTED_OPTIMISED}±{TOL}); range "
                  f"[{min(covs):.4f}, {max(covs):.4f}]")
    assert med >= REPORTED_FIXED
    assert abs(med - REPORTED_OPTIMISED) <= TOL


def test_3_initial_run_convergence(table1):
    results = [solve(table1.with_overrides(seed=s)) for s in SEEDS]
    good = sum(r.feasible and r.best_coverage >= 0.8 for r in results)
    monotone = all(all(b[0] <= a[0] for a, b in zip(r.convergence_trace, r.convergence_trace[1:]))
                   for r in results)
    covs = [round(r.best_coverage, 4) for r in results]
    record(3, good >= 8 and monotone,
           f"{good}/10 runs feasible with coverage >= 0.8 (ceiling {CEILING}); traces monotone: "
           f"{monotone}; coverages {covs}; lamps {[r.lamps for r in results]}")
    assert monotone
    assert good >= 8


def test_4_oracle_equivalence(table1):
    rng = np.random.default_rng(20240501)
    worst = 0.0
    t0 = time.perf_counter()
    for _ in range(100):
        m = int(rng.integers(1, 21))
        ps = [Placement(float(rng.uniform(0, 1000)), float(rng.uniform(15, 50)), int(rng.random() < 0.5))
              for _ in range(m)]
        fps = footprints(table1.lidar, table1.road, ps)
        err = abs(effective_coverage(fps, ps, table1.road, table1.eta)
                  - raster_coverage(fps, ps, table1.road, table1.eta, RasterConfig(0.05)))
        worst = max(worst, err)
    record(4, worst <= 1e-3, f"max |analytic - raster| = {worst:.2e} over 100 layouts "
                             f"at 0.05 m ({time.perf_counter() - t0:.1f}s)")
    assert worst <= 1e-3


@pytest.mark.parametrize("name", ["small_m1", "small_m2"])
def test_5_small_instance_optimality(name):
    cfg = load_scenario(DATA / f"{name}.json")
    _, grid_f = grid_search(cfg, 1.0, 0.5)
    gaps = []
    for s in SEEDS:
        r = solve(cfg.with_overrides(seed=s))
        gaps.append((r.best_fitness - grid_f) / abs(grid_f))
    within = sum(g <= 0.05 for g in gaps)
    record(5, within >= 9, f"{name}: {within}/10 seeds within 5% of grid optimum {grid_f:.5f}; "
                           f"worst relative gap {max(gaps):+.4f}")
    assert within >= 9


def test_6_sensitivity_trends(table1):
    depths, bws = [5, 6, 7, 8, 9], [5.0, 10.0]
    rows = run_sweep(table1, depths, bws, n_seeds=10, master_seed=0)
    med = {(r["d"], r["bandwidth_gbps"]): r["cell_median_coverage"] for r in rows}
    non_increasing = all(med[d2, b] <= med[d1, b] for b in bws for d1, d2 in zip(depths, depths[1:]))
    ordered = all(med[d, 5.0] <= med[d, 10.0] for d in depths)
    curves = "; ".join(f"B={b:g}: " + ",".join(f"{med[d, b]:.4f}" for d in depths) for b in bws)
    record(6, non_increasing and ordered,
           f"median coverage non-increasing in d: {non_increasing}; B=5 <= B=10: {ordered}; {curves}")
    assert non_increasing
    assert ordered


def test_7_unit_formula_suite(table1):
    checks = {
        "octree_density(5)=524": octree_density(5) == 524,
        "octree_density(9)=2097164": octree_density(9) == 2_097_164,
        "penalty(h=0.5, rho=1)=0.25": penalty(0.5, 1.0) == pytest.approx(0.25, abs=1e-15),
    }
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        ps = [Placement(float(rng.uniform(0, 1000)), float(rng.uniform(15, 50)), int(rng.integers(0, 2)))
              for _ in range(int(rng.integers(0, 21)))]
        cells = partition(footprints(table1.lidar, table1.road, ps), ps, table1.road)
        worst = max(worst, abs(sum(c.hi - c.lo for c in cells) - table1.road.d_road))
    checks["partition sums to d_road (1e-9)"] = worst <= 1e-9
    base = solve(table1.with_overrides(seed=0, workers=1))
    same = all(solve(table1.with_overrides(seed=0, workers=w)).convergence_trace == base.convergence_trace
               for w in (2, 4))
    checks["bit-identical traces for 1/2/4 workers"] = same
    failed = [k for k, v in checks.items() if not v]
    record(7, not failed, "all sub-checks pass" if not failed else f"failed: {failed}")
    assert not failed
