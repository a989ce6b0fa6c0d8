"""``elid-planner`` command line: solve, evaluate, sweep, oracle-check.

Exit codes: 0 feasible (or check passed), 2 infeasible best / failed check,
1 operational error (bad input, I/O).

Sweep seeds: run ``k`` of every (depth, bandwidth) cell uses seed
``master_seed + k``. Cells therefore share random streams, and a one-cell,
one-seed sweep reproduces ``solve --seed master_seed`` exactly.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import GB, ScenarioConfig, ScenarioError, load_scenario
from .datamodel import profile
from .geometry import Placement, footprint, footprints
from .objective import constraint_penalties, fitness
from .oracle import RasterConfig, raster_coverage
from .solver import SolveResult, solve

log = logging.getLogger("elid_planner")

PLACEMENT_COLUMNS = ["index", "placed", "x", "z", "omega", "l_near", "l_far", "l_width",
                     "a_total", "a_rect", "x_start", "x_end", "d_m", "e_m"]
SWEEP_COLUMNS = ["d", "bandwidth_gbps", "seed", "coverage", "fitness", "lamps", "iterations",
                 "feasible", "cell_median_coverage"]


class InputError(Exception):
    pass


def _num(v: float) -> str:
    return repr(float(v))


def write_placements(path: Path, placements, cfg: ScenarioConfig) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(PLACEMENT_COLUMNS)
        for i, p in enumerate(placements):
            fp = footprint(cfg.lidar, cfg.road, p, cfg.width_sign)
            pr = profile(cfg.lidar, fp)
            w.writerow([i, p.placed, _num(p.x), _num(p.z), _num(fp.omega), _num(fp.l_near),
                        _num(fp.l_far), _num(fp.l_width), _num(fp.a_total), _num(fp.a_rect),
                        _num(fp.x_start), _num(fp.x_end), _num(pr.d_m), _num(pr.e_m)])


def read_placements(path, cfg: ScenarioConfig) -> list[Placement]:
    """Read ``x, z, placed`` columns (extra columns are ignored)."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise InputError(f"cannot read placements: {exc}") from exc
    out = []
    for n, row in enumerate(rows, start=2):
        try:
            p = Placement(float(row["x"]), float(row["z"]), int(float(row.get("placed") or 1)))
            p.validate(cfg.road)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}:{n}: bad placement row: {exc}") from exc
        out.append(p)
    if len(out) > cfg.num_elids:
        raise InputError(f"{len(out)} placements exceed num_elids={cfg.num_elids}")
    return out


def write_trace(path: Path, result: SolveResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "best_fitness", "best_coverage"])
        for t, (f, c) in enumerate(result.convergence_trace):
            w.writerow([t, _num(f), _num(c)])


def summarize(result: SolveResult, cfg: ScenarioConfig) -> str:
    lines = [
        f"scenario: {cfg.name or '-'}",
        f"seed: {cfg.swarm.seed}",
        f"feasible: {'yes' if result.feasible else 'no'}",
        f"coverage: {result.best_coverage:.6f}",
        f"reported coverage: {result.reported_coverage:.6f}",
        f"fitness: {result.best_fitness:.6f}",
        f"constraint penalty: {result.constraint_penalty:.6g}",
        f"lamps placed: {result.lamps} of {cfg.num_elids}",
        f"iterations: {result.iterations_run}",
    ]
    for i, p in enumerate(result.best_placements):
        if p.placed:
            lines.append(f"  unit {i}: x={p.x:.2f} m  z={p.z:.2f} m")
    return "\n".join(lines) + "\n"


def _load(args) -> ScenarioConfig:
    cfg = load_scenario(args.scenario)
    over = {}
    if getattr(args, "width_sign", None):
        over["width_sign"] = args.width_sign
    if getattr(args, "binary_transfer", None):
        over["binary_transfer"] = args.binary_transfer
    if getattr(args, "workers", None):
        over["workers"] = args.workers
    if getattr(args, "seed", None) is not None:
        over["seed"] = args.seed
    return cfg.with_overrides(**over) if over else cfg


def cmd_solve(args) -> int:
    cfg = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = solve(cfg)
    write_placements(out / "placements.csv", result.best_placements, cfg)
    write_trace(out / "trace.csv", result)
    text = summarize(result, cfg)
    (out / "summary.txt").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return 0 if result.feasible else 2


def evaluate_report(cfg: ScenarioConfig, placements) -> dict:
    fb = fitness(placements, cfg)
    fps = footprints(cfg.lidar, cfg.road, placements, cfg.width_sign)
    profiles = [profile(cfg.lidar, fp) for fp in fps]
    _, values = constraint_penalties(placements, profiles, cfg.bandwidth, cfg.energy_limit, cfg.rho)
    return {"breakdown": fb, "constraints": values}


def cmd_evaluate(args) -> int:
    cfg = _load(args)
    placements = read_placements(args.placements, cfg)
    signs = ("plus", "minus") if args.both_signs else (cfg.width_sign,)
    feasible = True
    for sign in signs:
        c = cfg.with_overrides(width_sign=sign)
        rep = evaluate_report(c, placements)
        fb = rep["breakdown"]
        feasible = feasible and fb.feasible
        print(f"width sign: {sign}")
        print(f"coverage: {fb.coverage!r}")
        print(f"reported coverage: {fb.reported_coverage!r}")
        print(f"fitness: {fb.fitness!r}")
        print(f"lamp penalty: {fb.lamp_count_penalty!r}")
        print(f"constraint penalty: {fb.constraint_penalty!r}")
        print(f"feasible: {'yes' if fb.feasible else 'no'}")
        for name, (h, _) in rep["constraints"].items():
            print(f"  slack {name}: {-h:.6g}")
    return 0 if feasible else 2


def _parse_list(text: str, kind=float) -> list:
    vals = [kind(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise InputError("sweep lists must not be empty")
    return vals


def _sweep_run(job):
    cfg, depth, bw_gbps, seed = job
    c = cfg.with_overrides(octree_depth=depth, bandwidth=bw_gbps * GB, seed=seed)
    r = solve(c)
    return {"d": depth, "bandwidth_gbps": bw_gbps, "seed": seed, "coverage": r.reported_coverage,
            "fitness": r.best_fitness, "lamps": r.lamps, "iterations": r.iterations_run,
            "feasible": int(r.feasible)}


def run_sweep(cfg: ScenarioConfig, depths, bandwidths_gbps, n_seeds: int, master_seed: int = 0,
              parallel: int = 1) -> list[dict]:
    if not depths or not bandwidths_gbps or n_seeds < 1:
        raise InputError("sweep needs at least one depth, one bandwidth and one seed")
    jobs = [(cfg, d, b, master_seed + k) for d in depths for b in bandwidths_gbps for k in range(n_seeds)]
    if parallel > 1:
        with ProcessPoolExecutor(parallel) as ex:
            rows = list(ex.map(_sweep_run, jobs))
    else:
        rows = [_sweep_run(j) for j in jobs]
    medians = {}
    for d in depths:
        for b in bandwidths_gbps:
            medians[d, b] = float(np.median([r["coverage"] for r in rows
                                             if r["d"] == d and r["bandwidth_gbps"] == b]))
    for r in rows:
        r["cell_median_coverage"] = medians[r["d"], r["bandwidth_gbps"]]
    return rows


def cmd_sweep(args) -> int:
    cfg = _load(args)
    depths = _parse_list(args.depths, int)
    bws = _parse_list(args.bandwidths_gbps, float)
    rows = run_sweep(cfg, depths, bws, args.seeds, cfg.swarm.seed, args.parallel)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "sweep.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS)
        w.writeheader()
        for r in rows:
            w.writerow({k: (_num(v) if isinstance(v, float) else v) for k, v in r.items()})
    for d in depths:
        cells = "  ".join(f"B={b:g}GB/s: {next(r['cell_median_coverage'] for r in rows if r['d'] == d and r['bandwidth_gbps'] == b):.4f}"
                          for b in bws)
        print(f"d={d}  {cells}")
    return 0


def oracle_check(cfg: ScenarioConfig, resolution: float, trials: int, seed: int = 0, tol: float = 1e-3):
    """Compare analytic and rasterised coverage on random layouts; returns the error list."""
    from .objective import effective_coverage

    rng = np.random.default_rng(seed)
    road = cfg.road
    errors = []
    for _ in range(trials):
        m = int(rng.integers(1, cfg.num_elids + 1))
        ps = [Placement(float(rng.uniform(0, road.d_road)), float(rng.uniform(road.z_min, road.z_max)),
                        int(rng.random() < 0.5)) for _ in range(m)]
        fps = footprints(cfg.lidar, road, ps, cfg.width_sign)
        a = effective_coverage(fps, ps, road, cfg.eta)
        b = raster_coverage(fps, ps, road, cfg.eta, RasterConfig(resolution))
        errors.append(abs(a - b))
    return errors


def cmd_oracle_check(args) -> int:
    cfg = _load(args)
    errors = oracle_check(cfg, args.resolution, args.trials, args.check_seed)
    worst = max(errors)
    ok = worst <= args.tol
    print(f"trials: {len(errors)}  resolution: {args.resolution} m  max |analytic - raster|: {worst:.3e}")
    print("PASS" if ok else "FAIL")
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elid-planner", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("scenario", help="scenario JSON file or bundled name (table1, tight_d9)")
        p.add_argument("--width-sign", choices=("plus", "minus"))
        p.add_argument("--binary-transfer", choices=("as_written", "standard"))
        p.add_argument("--workers", type=int)

    p = sub.add_parser("solve", help="optimise a layout")
    common(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("evaluate", help="score a fixed layout")
    common(p)
    p.add_argument("--placements", required=True)
    p.add_argument("--both-signs", action="store_true", help="report both lateral-width sign variants")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="octree depth x bandwidth sensitivity sweep")
    common(p)
    p.add_argument("--depths", default="5,6,7,8,9")
    p.add_argument("--bandwidths-gbps", default="5,10")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed", type=int, help="master seed (default: scenario seed)")
    p.add_argument("--parallel", type=int, default=1, help="cells solved concurrently")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle-check", help="analytic vs rasterised coverage")
    common(p)
    p.add_argument("--resolution", type=float, default=0.05)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--check-seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ScenarioError, InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
