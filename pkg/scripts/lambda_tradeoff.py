"""How the lamp-count weight shapes the optimum: lamps and coverage against lambda."""
import argparse
import statistics
from dataclasses import replace

from elid_planner.config import load_scenario
from elid_planner.solver import solve


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scenario", default="table1")
    ap.add_argument("--lambdas", default="0,0.05,0.1,0.15,0.2,0.25,0.3")
    ap.add_argument("--seeds", type=int, default=5)
    args = ap.parse_args()

    base = load_scenario(args.scenario)
    print("lambda  median_coverage  median_lamps")
    for lam in (float(v) for v in args.lambdas.split(",")):
        cfg = replace(base, lam=lam)
        runs = [solve(cfg.with_overrides(seed=s)) for s in range(args.seeds)]
        print(f"{lam:6.3f}  {statistics.median(r.reported_coverage for r in runs):15.4f}  "
              f"{statistics.median(r.lamps for r in runs):12g}")


if __name__ == "__main__":
    main()
