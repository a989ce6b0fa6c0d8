"""Fixed evenly spaced layout against PSO-optimised layouts on the tight_d9 scenario."""
import argparse
import statistics

from elid_planner.config import load_scenario
from elid_planner.geometry import Placement
from elid_planner.objective import fitness
from elid_planner.solver import solve


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scenario", default="tight_d9")
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()

    cfg = load_scenario(args.scenario)
    fixed = [Placement(x, 40.0) for x in (125, 375, 625, 875)]
    for sign in ("plus", "minus"):
        fb = fitness(fixed, cfg.with_overrides(width_sign=sign))
        print(f"fixed layout [{sign}]: coverage={fb.coverage:.4f} reported={fb.reported_coverage:.4f} "
              f"fitness={fb.fitness:.4f} feasible={fb.feasible}")

    covs = []
    for seed in range(args.seeds):
        r = solve(cfg.with_overrides(seed=seed))
        covs.append(r.reported_coverage)
        print(f"seed {seed}: coverage={r.reported_coverage:.4f} fitness={r.best_fitness:.4f} "
              f"lamps={r.lamps} iterations={r.iterations_run}")
    print(f"median optimised coverage: {statistics.median(covs):.4f}")


if __name__ == "__main__":
    main()
