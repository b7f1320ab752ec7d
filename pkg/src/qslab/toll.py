"""Toll functions of the Quicksort recurrence and the L2 toll error.

``C(u) = 2u ln u + 2(1-u) ln(1-u) + 1`` is the limit toll, ``C_n(i)`` the
exact discrete toll, and ``b_n = ||C_n(ceil(nU)) - C(U)||_2`` their L2
distance under the coupling ``i = ceil(nU)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .constants import MP_DPS, SIGMA2_MP, TOLL_COEF_MP
from .exact import harmonic, mean_comparisons

__all__ = [
    "c_limit",
    "c_discrete",
    "c_discrete_row",
    "toll_antiderivative",
    "TollErrorRow",
    "b_n_exact",
    "toll_sup_deviation",
]


def c_limit(u) -> float:
    """Limit toll ``C(u)`` on ``[0, 1]``; ``C(0) = C(1) = 1``."""
    if not 0 <= u <= 1:
        raise ValueError("u must lie in [0, 1]")
    u = float(u)
    if u == 0 or u == 1:
        return 1.0
    return 2 * u * math.log(u) + 2 * (1 - u) * math.log1p(-u) + 1


def c_limit_mp(u):
    u = mpmath.mpf(u)
    if u == 0 or u == 1:
        return mpmath.mpf(1)
    return 2 * u * mpmath.log(u) + 2 * (1 - u) * mpmath.log(1 - u) + 1


def c_discrete(n: int, i: int) -> Fraction:
    """Exact discrete toll ``(n-1)/n + (mu_{i-1} + mu_{n-i} - mu_n)/n``."""
    if not 1 <= i <= n:
        raise ValueError(f"pivot rank i={i} outside [1, {n}]")
    mu = mean_comparisons
    return Fraction(n - 1, n) + (mu(i - 1) + mu(n - i) - mu(n)) / n


def c_discrete_row(n: int) -> list[Fraction]:
    """``[C_n(1), ..., C_n(n)]``."""
    nums, den = _toll_numerators(n)
    return [Fraction(t, den) for t in nums]


def _toll_numerators(n: int) -> tuple[list[int], int]:
    """Integers ``t_i`` and ``D`` with ``C_n(i) = t_i / D`` (not reduced)."""
    if n < 1:
        raise ValueError("n must be positive")
    # L * mu_k is an integer for the common denominator L of H_0..H_n
    L = _harmonic_denominator(n)
    m = [0]
    for k in range(1, n + 1):
        h = harmonic(k)[0]
        m.append(2 * (k + 1) * h.numerator * (L // h.denominator) - 4 * k * L)
    nums = [(n - 1) * L + m[i - 1] + m[n - i] - m[n] for i in range(1, n + 1)]
    return nums, n * L


@lru_cache(maxsize=None)
def _harmonic_denominator(n: int) -> int:
    return math.lcm(*range(1, n + 1))


def toll_antiderivative(u) -> float:
    """``F(u) = u^2 ln u - (1-u)^2 ln(1-u)``, an antiderivative of ``C``."""
    if not 0 <= u <= 1:
        raise ValueError("u must lie in [0, 1]")
    u = float(u)
    a = u * u * math.log(u) if u > 0 else 0.0
    b = (1 - u) ** 2 * math.log1p(-u) if u < 1 else 0.0
    return a - b


def _antiderivative_mp(u):
    a = u * u * mpmath.log(u) if u > 0 else mpmath.mpf(0)
    b = (1 - u) ** 2 * mpmath.log(1 - u) if u < 1 else mpmath.mpf(0)
    return a - b


@dataclass(frozen=True)
class TollErrorRow:
    n: int
    b_n_squared: mpmath.mpf
    lemma_bound: mpmath.mpf

    @property
    def b_n(self):
        return mpmath.sqrt(self.b_n_squared)

    @property
    def holds(self) -> bool:
        return self.b_n <= self.lemma_bound


def b_n_exact(n: int, dps: int = MP_DPS) -> TollErrorRow:
    """Squared L2 toll error::

        b_n^2 = sigma^2/3 - 2 sum_i C_n(i) [F(i/n) - F((i-1)/n)] + (1/n) sum_i C_n(i)^2

    The last sum is exact; the transcendental parts use ``dps`` digits.
    Both ``C_n`` and the increments of ``F`` are symmetric under
    ``i -> n+1-i``, so only half the cross terms are evaluated.
    """
    if n < 1:
        raise ValueError("n must be positive")
    nums, den = _toll_numerators(n)
    square_sum = Fraction(sum(t * t for t in nums), n * den * den)
    with mpmath.workdps(dps):
        mden = mpmath.mpf(den)
        f_prev = mpmath.mpf(0)
        cross = mpmath.mpf(0)
        half = n // 2
        for i in range(1, half + 1):
            f_cur = _antiderivative_mp(mpmath.mpf(i) / n)
            cross += 2 * mpmath.mpf(nums[i - 1]) * (f_cur - f_prev)
            f_prev = f_cur
        if n % 2:
            cross += mpmath.mpf(nums[half]) * (_antiderivative_mp(mpmath.mpf(half + 1) / n) - f_prev)
        cross /= mden
        sq = mpmath.mpf(square_sum.numerator) / square_sum.denominator
        b2 = SIGMA2_MP / 3 - 2 * cross + sq
        bound = TOLL_COEF_MP / n
    return TollErrorRow(n, b2, bound)


def toll_sup_deviation(n: int) -> float:
    """``max_u |C_n(ceil(nu)) - C(u)|`` (diagnostic only).

    ``C`` is convex with its minimum at 1/2, so on each cell the extreme
    values sit at the cell ends or at 1/2.
    """
    row = c_discrete_row(n)
    worst = 0.0
    for i, c in enumerate(row, start=1):
        pts = [(i - 1) / n, i / n]
        if pts[0] < 0.5 < pts[1]:
            pts.append(0.5)
        worst = max(worst, max(abs(float(c) - c_limit(u)) for u in pts))
    return worst

