"""Exact moment generating functions against their explicit bounds.

Run with ``python demos/mgf_bounds.py``.
"""

import math

from qslab import exact, mgf

# %%
# E exp(lam Yhat_n) increases with n toward the limit, and the limit bound
# sits far above it for large |lam|.
print(f"L0 = {mgf.L0:.6f}")
print("\n lam    n=5       n=20      n=40      limit bound")
for lam in mgf.LAMBDA_GRID:
    vals = [mgf.exact_mgf(exact.normalized(n, "Y-hat"), lam) for n in (5, 20, 40)]
    print(f"{lam:+.1f}  " + "  ".join(f"{v:8.5f}" for v in vals) + f"  {mgf.homer_bound(lam):.4g}")

# %%
# Tail bounds: the exact probability of a relative deviation eps against the
# bound at lam = ln ln n.
print("\n  n   eps   exact tail     bound")
for n in (10, 20, 40):
    pmf = exact.exact_pmf(n)
    for eps in (0.1, 0.3):
        tail = float(mgf.exact_tail(pmf, eps))
        print(f"{n:3d}  {eps:.1f}  {tail:.3e}   {mgf.large_dev_bound_auto(n, eps):.3e}")

# %%
# The bound only becomes useful for very large n; find where it drops below 1.
for eps in (0.5, 1.0):
    n = 3
    while mgf.large_dev_bound_auto(n, eps) >= 1:
        n = math.ceil(n * 1.5)
    print(f"eps={eps}: bound < 1 from about n = {n:.3g}")
