"""Mean LSH candidate-set size against index size, for eyeballing the n**rho trend.

Queries are noisy copies of stored points. A log-log slope well below 1 means
candidate work grows sublinearly in the number of stored entries.
"""

import argparse

import numpy as np

from computeless.lsh import LshIndex, LshParams


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tables", type=int, default=8)
    ap.add_argument("--bits", type=int, default=10)
    ap.add_argument("--dim", type=int, default=64)
    ap.add_argument("--sigma", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    sizes = [100, 200, 400, 800, 1600, 3200]
    pts = rng.standard_normal((sizes[-1], args.dim))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    idx = LshIndex(LshParams(args.tables, args.bits, args.dim, seed=args.seed))
    rows = []
    for n in sizes:
        for i in range(idx.size, n):
            idx.insert(pts[i], i)
        probe = pts[rng.integers(n, size=200)]
        probe = probe + rng.normal(0, args.sigma, probe.shape)
        counts = idx.candidate_counts(probe)
        rows.append((n, float(np.mean(counts))))
        print(f"n={n:5d} mean candidates={rows[-1][1]:9.2f}")
    slope = np.polyfit(np.log([r[0] for r in rows]), np.log([r[1] for r in rows]), 1)[0]
    print(f"log-log slope (empirical rho) = {slope:.3f}")


if __name__ == "__main__":
    main()
