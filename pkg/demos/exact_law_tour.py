"""A tour of the exact law of the Quicksort comparison count.

Run with ``python demos/exact_law_tour.py``.  Everything printed here is
exact rational arithmetic except where a float is asked for explicitly.
"""

# %%
# The law of X_n for small n.  Masses are exact fractions.
import math

from qslab import exact, metrics
from qslab.constants import SIGMA, SIGMA2

for n in range(2, 6):
    pmf = exact.exact_pmf(n)
    law = ", ".join(f"{k}: {exact.format_rational(m)}" for k, m in pmf.items() if m)
    print(f"X_{n} ~ {{{law}}}")

# %%
# Mean and variance from the closed forms, cross-checked against the law.
for n in (4, 10, 40):
    pmf = exact.exact_pmf(n)
    mu, var = exact.mean_comparisons(n), exact.variance_comparisons(n)
    assert pmf.mean() == mu and pmf.variance() == var
    print(f"n={n:3d}  mean={float(mu):10.4f}  var={float(var):10.4f}")

# %%
# The normalized variance creeps up to sigma^2 = 7 - 2 pi^2 / 3, roughly like
# sigma^2 - 2 ln(n) / n.
print(f"\nsigma^2 = {SIGMA2:.6f}")
for n in (5, 10, 20, 40, 50):
    var_y = float(exact.variance_comparisons(n)) / n**2
    print(f"n={n:3d}  Var Y_n={var_y:.6f}  sigma^2 - 2 ln n/n={SIGMA2 - 2 * math.log(n) / n:.6f}")

# %%
# Distances between neighbouring laws shrink; d2 is computed exactly through
# the quantile coupling.
y = {n: exact.normalized(n) for n in range(1, 51)}
print("\n  n   d2(Y_n, Y_50)   KS(Y_n, Y_50)   sqrt(n) d2")
for n in (2, 5, 10, 20, 30, 40):
    d2 = metrics.wasserstein_p(y[n], y[50], 2)
    ks = float(metrics.ks_distance(y[n], y[50]))
    print(f"{n:3d}   {d2:.6f}        {ks:.6f}        {math.sqrt(n) * d2:.4f}")

# %%
# The distance from the point mass Y_2 is exactly the standard deviation.
print(f"\nd2(Y_2, Y_50)^2 = Var Y_50: {metrics.d2_squared(y[2], y[50]) == y[50].variance()}")
print(f"sd(Y_50) = {math.sqrt(y[50].variance()):.6f} < sigma = {SIGMA:.6f}")
