"""Moment generating functions of the normalized comparison count and the
explicit bounds on them.

Exact MGFs are evaluated from exact atoms in floating point.  Every bound
works in log space (``log_*`` functions) so comparisons never overflow;
the plain versions exponentiate and return ``inf`` above ``exp(700)``.
"""

from __future__ import annotations

import math
from fractions import Fraction

from scipy.optimize import brentq

from .distribution import DiscreteDistribution
from .exact import mean_comparisons

__all__ = [
    "MgfOverflowError",
    "exact_mgf",
    "log_exact_mgf",
    "solve_L0",
    "L0",
    "log_homer_bound",
    "homer_bound",
    "log_corollary_bound",
    "corollary_bound",
    "corollary_global_bound",
    "log_remark_bound",
    "remark_bound",
    "REMARK_NOTE",
    "large_dev_bound",
    "large_dev_bound_auto",
    "exact_tail",
    "mgf_rate_bound",
    "LAMBDA_GRID",
]

EXP_CAP = 700.0

# Fixed grid for the monotonicity and domination sweeps.
LAMBDA_GRID = (-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0)

REMARK_NOTE = "stated bound; its proof is in a separate appendix and is not checked here"


class MgfOverflowError(OverflowError):
    pass


def _exp(log_value: float) -> float:
    return math.inf if log_value > EXP_CAP else math.exp(log_value)


def log_exact_mgf(atoms: DiscreteDistribution, lam: float) -> float:
    lam = float(lam)
    exps = [lam * float(x) for x in atoms.locations]
    top = max(exps)
    if top > EXP_CAP or min(exps) < -EXP_CAP:
        raise MgfOverflowError(f"|lambda * location| reaches {max(top, -min(exps)):.1f} > {EXP_CAP}")
    return top + math.log(math.fsum(float(m) * math.exp(e - top) for e, m in zip(exps, atoms.masses)))


def exact_mgf(atoms: DiscreteDistribution, lam: float) -> float:
    """``E exp(lam Z) = sum mass * exp(lam * location)``."""
    return math.exp(log_exact_mgf(atoms, lam))


def _l0_gap(x):
    return math.exp(x) - 6 * x * x


def solve_L0(lo: float = 4.0, hi: float = 6.0) -> float:
    """Largest root of ``e^L = 6 L^2``."""
    if _l0_gap(lo) >= 0 or _l0_gap(hi) <= 0:
        raise ValueError("bracket does not isolate the largest root")
    return brentq(_l0_gap, lo, hi, xtol=1e-15, rtol=1e-15)


L0 = solve_L0()

# (upper end of region, coefficient c in exp(c lam^2)); the last region
# uses exp(2 e^lam) instead.
_LIMIT_PIECES = ((-0.62, 1.25), (0.0, 0.5), (0.42, 1.0), (L0, 12.0))
_REMARK_PIECES = ((-0.58, 1.34), (0.0, 0.5), (0.42, 1.0), (L0, 12.0))


def _piece_values(lam, pieces):
    """Log-values of every piece whose closed region contains ``lam``."""
    vals = []
    lower = -math.inf
    for upper, c in pieces:
        if lower <= lam <= upper:
            vals.append(c * lam * lam)
        lower = upper
    if lam >= lower:
        vals.append(2 * math.exp(lam) if lam < EXP_CAP else math.inf)
    return vals


def log_homer_bound(lam: float) -> float:
    """Log of the five-piece bound on ``E exp(lam Y)`` for the limit ``Y``.

    At a breakpoint the smaller adjacent piece is used.
    """
    return min(_piece_values(float(lam), _LIMIT_PIECES))


def homer_bound(lam: float) -> float:
    return _exp(log_homer_bound(lam))


def log_corollary_bound(n: int, lam: float) -> float:
    """Log bound on ``E exp(lam Y_n)`` from ``lam Y_n = lam (n+1)/n * Yhat_n``."""
    if n < 1:
        raise ValueError("n must be positive")
    return log_homer_bound(lam * (n + 1) / n)


def corollary_bound(n: int, lam: float) -> float:
    return _exp(log_corollary_bound(n, lam))


def corollary_global_bound(n: int, lam: float) -> float:
    """``exp(max(12 ((n+1)/n)^2 lam^2, 2 e^{(n+1)/n lam}))``."""
    s = (n + 1) / n
    return _exp(max(12 * s * s * lam * lam, 2 * math.exp(min(s * lam, EXP_CAP))))


def log_remark_bound(lam: float) -> float:
    """Log of the n-free bound on ``E exp(lam Y_n)``; see :data:`REMARK_NOTE`."""
    return min(_piece_values(float(lam), _REMARK_PIECES))


def remark_bound(lam: float) -> float:
    return _exp(log_remark_bound(lam))


def large_dev_bound(n: int, eps: float, lam: float) -> float:
    """``2 exp(3 eps lam + max(12 lam^2, 2 e^lam)) n^{-2 eps lam}`` bounding
    ``P(|X_n - mu_n| >= eps mu_n)``."""
    if n < 1:
        raise ValueError("n must be positive")
    if eps <= 0 or lam <= 0:
        raise ValueError("eps and lambda must be positive")
    log_val = math.log(2) + 3 * eps * lam + max(12 * lam * lam, 2 * math.exp(lam)) - 2 * eps * lam * math.log(n)
    return _exp(log_val)


def large_dev_bound_auto(n: int, eps: float) -> float:
    """:func:`large_dev_bound` at ``lam = ln ln n``."""
    if n < 3:
        raise ValueError("lambda = ln ln n needs n >= 3")
    return large_dev_bound(n, eps, math.log(math.log(n)))


def exact_tail(pmf, eps) -> Fraction:
    """Exact ``P(|X_n - mu_n| >= eps mu_n)`` for rational-convertible ``eps``."""
    eps = Fraction(str(eps)) if isinstance(eps, float) else Fraction(eps)
    mu = mean_comparisons(pmf.n)
    return sum((m for k, m in pmf.items() if abs(k - mu) >= eps * mu), Fraction(0))


def mgf_rate_bound(n: int, lam: float) -> float:
    """``3 |lam| exp(max(24 s^2 lam^2, e^{2 s lam})) / sqrt(n)``, ``s = (n+1)/n``,
    bounding ``|E exp(lam Y_n) - E exp(lam Y)|`` for real ``lam``."""
    if n < 1:
        raise ValueError("n must be positive")
    if lam == 0:
        return 0.0
    s = (n + 1) / n
    inner = max(24 * s * s * lam * lam, math.exp(min(2 * s * lam, EXP_CAP)))
    return _exp(math.log(3 * abs(lam)) + inner - 0.5 * math.log(n))
