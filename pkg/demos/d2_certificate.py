"""Building the d2 ledger and certifying d2(Y_n, Y) < 2 / sqrt(n).

Run with ``python demos/d2_certificate.py [--N 100]``.
"""

import argparse

from qslab import ledger, toll
from qslab.constants import TOLL_COEF

parser = argparse.ArgumentParser()
parser.add_argument("--N", type=int, default=100)
args = parser.parse_args()

# %%
# The toll error b_n decays like 1/n; n b_n stays well below its bound.
print("  n   n*b_n     bound")
for n in (1, 2, 5, 10, 50, 100, 500):
    row = toll.b_n_exact(n)
    print(f"{n:4d}  {n * float(row.b_n):.4f}   {TOLL_COEF:.4f}")

# %%
# The ledger: each abar_n bounds d2(Y_n, Y) using only earlier rows.
L = ledger.build_ledger(args.N)
vbar, w = ledger.partial_sums(L, args.N)
print(f"\nVbar_{args.N} = {float(vbar):.6f}   W_{args.N} = {float(w):.6f}")
print(f"sqrt(N) abar_N = {float(L.row(args.N).scaled):.6f}")
print(f"max sqrt(n) abar_n = {float(L.max_scaled()):.6f}")

# %%
# Start from A = 8, which closes the induction analytically, and refine.
cert = ledger.certify_d2(args.N, ledger=L)
for it in cert.iterations:
    print(f"A = {it['A_in']:.4f}  ->  A_N = {it['A_out']:.6f}")
print(f"\ncertified: d2(Y_n, Y) <= {cert.final_A:.5f} / sqrt(n) for every n >= 1")
print(f"tightest margin among {len(cert.checks)} checks: {min(c['margin'] for c in cert.checks):.3g}")
