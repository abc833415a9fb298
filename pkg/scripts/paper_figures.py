"""Reproduce the redundancy, completion, computation and correctness/gain series.

Sweeps num_tasks over 10..100 for the three strategies and writes one tidy
CSV plus a printed table per series.

    python scripts/paper_figures.py [--scenario scenarios/default.json] [--out out/figures]
"""

import argparse
import csv
import dataclasses
from pathlib import Path

from computeless.config import load_scenario
from computeless.engine import Scenario, Strategy, run_experiment

SERIES = [
    ("redundancy rate", "redundancy_rate", [Strategy.EDGE_REUSE]),
    ("completion time (s)", "mean_completion_time", list(Strategy)),
    ("computation time (s)", "mean_computation_time", list(Strategy)),
    ("reuse hit rate", "reuse_hit_rate", [Strategy.EDGE_REUSE]),
    ("output correctness", "output_correctness", [Strategy.EDGE_REUSE]),
    ("completion gain", "completion_gain", [Strategy.EDGE_REUSE]),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scenario")
    ap.add_argument("--out", default="out/figures")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    base = load_scenario(args.scenario)[0] if args.scenario else Scenario()
    sizes = list(range(10, 101, 10))
    results = {}
    for n in sizes:
        sc = dataclasses.replace(base, workload_config=dataclasses.replace(
            base.workload_config, num_tasks=n))
        for st in Strategy:
            results[n, st] = run_experiment(sc.with_strategy(st), args.workers)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "series.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["num_tasks", "strategy", "metric", "value"])
        for (n, st), rep in results.items():
            for _, field, _ in SERIES:
                w.writerow([n, st.value, field, getattr(rep, field)])

    for title, field, strategies in SERIES:
        print(f"\n{title}")
        print("tasks " + "".join(f"{s.value:>14}" for s in strategies))
        for n in sizes:
            print(f"{n:5d} " + "".join(f"{getattr(results[n, s], field):14.5f}"
                                       for s in strategies))
    print(f"\nwrote {out / 'series.csv'}")


if __name__ == "__main__":
    main()
