"""Solve the bundled initial-run scenario and dump the convergence trace.

    python scripts/initial_run.py --seed 0 --out runs/initial
"""
import argparse
from pathlib import Path

from elid_planner.cli import summarize, write_placements, write_trace
from elid_planner.config import load_scenario
from elid_planner.solver import solve


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scenario", default="table1")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="runs/initial")
    args = ap.parse_args()

    cfg = load_scenario(args.scenario).with_overrides(seed=args.seed)
    result = solve(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_trace(out / "trace.csv", result)
    write_placements(out / "placements.csv", result.best_placements, cfg)
    print(summarize(result, cfg), end="")
    print(f"trace written to {out / 'trace.csv'}")


if __name__ == "__main__":
    main()
