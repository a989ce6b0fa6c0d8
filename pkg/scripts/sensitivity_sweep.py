"""Octree depth x bandwidth sweep; writes sweep.csv (same format as ``elid-planner sweep``)."""
import argparse
import sys

from elid_planner.cli import main as cli_main


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--scenario", default="table1")
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--parallel", type=int, default=1)
    ap.add_argument("--out", default="runs/sweep")
    a = ap.parse_args()
    sys.exit(cli_main(["sweep", a.scenario, "--depths", "5,6,7,8,9", "--bandwidths-gbps", "5,10",
                       "--seeds", str(a.seeds), "--parallel", str(a.parallel), "--out", a.out]))
