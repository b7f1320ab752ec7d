"""Monte Carlo look at the limit law: samples, density, fixed point.

Run with ``python demos/limit_lab.py --seed 11``.  Writes plot-ready CSV
files next to the current directory when ``--out`` is given.
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from qslab import exact, limit, metrics
from qslab.distribution import point_mass

parser = argparse.ArgumentParser()
parser.add_argument("--seed", type=int, required=True)
parser.add_argument("--n", type=int, default=10**4)
parser.add_argument("--reps", type=int, default=10**5)
parser.add_argument("--out", type=Path)
args = parser.parse_args()

# %%
# Sampling goes through random binary search trees.  At n = 50 the batch
# should sit inside the DKW band around the exact law.
check = limit.sample_path_lengths(50, args.reps, args.seed)
ks = float(metrics.ks_distance(limit.empirical_cdf(check), exact.normalized(50)))
print(f"KS(sample, exact Y_50) = {ks:.5f}   DKW band = {limit.dkw_bound(args.reps):.5f}")

# %%
# A large-n batch stands in for the limit Y.
batch = limit.sample_path_lengths(args.n, args.reps, args.seed)
emp = limit.empirical_cdf(batch)
counts = batch.counts.astype(float)
mu = float(exact.mean_comparisons(args.n))
y = (counts - mu) / args.n
print(f"\nn = {args.n}: mean Y = {y.mean():+.5f}, var Y = {y.var():.5f}")

# %%
# Window density estimate at the width that balances its two error terms.
est = limit.density_window(emp)
peak = est.grid[np.argmax(est.values)]
print(f"delta* = {est.delta:.5f}, integral = {est.integral():.4f}, peak {est.values.max():.4f} at {peak:+.3f}")

# %%
# The fixed-point residual separates a good surrogate from a bad one.
for name, law in [("point mass", point_mass()), ("Y_10", exact.normalized(10)),
                  ("Y_50", exact.normalized(50)), (f"sample n={args.n}", emp)]:
    print(f"fixed-point residual of {name:>14}: {limit.fixed_point_residual(law, 10**5, args.seed):.4f}")

# %%
# Local limit: n P(X_n = k) against the density at (k - mu_n)/n.
rows = limit.local_limit_probe(40, est)
worst = max(abs(r["gap"]) for r in rows if r["in_grid"])
print(f"\nlocal limit at n = 40: max |n P(X_n = k) - f(x_k)| = {worst:.4f}")

if args.out:
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "density.csv", "w", newline="") as fh:
        csv.writer(fh).writerows(est.csv_rows())
    with open(args.out / "local_limit.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {args.out}/density.csv and {args.out}/local_limit.csv")
