"""Minimal-coupling distances between discrete laws.

For laws on the line the quantile coupling ``(F^{-1}(u), G^{-1}(u))`` is
optimal for every ``d_p`` at once, so ``d_p`` reduces to a sum over the
merged breakpoints of the two cumulative mass sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .distribution import DiscreteDistribution

__all__ = [
    "Segment",
    "CouplingSegments",
    "quantile_coupling",
    "wasserstein_p",
    "wasserstein_p_power",
    "d2_squared",
    "ks_distance",
    "moment_norm",
    "ks_from_dp",
    "lattice_ks_lower",
    "integer_mass_lower",
    "sqrt_sum_le",
    "three_variable_bound",
]


class Segment(NamedTuple):
    width: object
    x: object
    y: object


@dataclass(frozen=True)
class CouplingSegments:
    segments: tuple

    def __len__(self):
        return len(self.segments)

    @property
    def widths(self):
        return tuple(s.width for s in self.segments)


def _common_mode(d1, d2):
    if d1.exact and d2.exact:
        return d1, d2
    return d1.to_float(), d2.to_float()


def quantile_coupling(d1: DiscreteDistribution, d2: DiscreteDistribution) -> CouplingSegments:
    """Segments of ``(0, 1]`` on which both quantile functions are constant."""
    d1, d2 = _common_mode(d1, d2)
    c1, c2 = d1.cumulative, d2.cumulative
    last1, last2 = len(c1) - 1, len(c2) - 1
    i = j = 0
    prev = 0
    segs = []
    while True:
        done = i == last1 and j == last2
        cut = 1 if done else min(c1[i], c2[j])
        if cut > prev:
            segs.append(Segment(cut - prev, d1.locations[i], d2.locations[j]))
            prev = cut
        if done:
            break
        step1 = i < last1 and c1[i] <= cut
        step2 = j < last2 and c2[j] <= cut
        if not (step1 or step2):
            # float round-off: one list ended just below the other's level
            step1, step2 = i < last1, j < last2
        i += step1
        j += step2
    return CouplingSegments(tuple(segs))


def wasserstein_p_power(d1, d2, p):
    """``d_p(d1, d2)^p``; exact for integer ``p`` when both laws are exact."""
    if p < 1:
        raise ValueError("p must be >= 1")
    segs = quantile_coupling(d1, d2).segments
    if d1.exact and d2.exact and float(p).is_integer():
        p = int(p)
        return sum(s.width * abs(s.x - s.y) ** p for s in segs)
    return math.fsum(float(s.width) * abs(float(s.x) - float(s.y)) ** p for s in segs)


def wasserstein_p(d1, d2, p=2) -> float:
    """Minimal ``L^p`` distance ``d_p``."""
    return float(wasserstein_p_power(d1, d2, p)) ** (1.0 / p)


def d2_squared(d1, d2):
    return wasserstein_p_power(d1, d2, 2)


def ks_distance(d1, d2):
    """Kolmogorov-Smirnov distance ``sup_x |F1(x) - F2(x)|``.

    Both CDFs are step functions, so the supremum is attained at a jump.
    Scanning the merged atom grid covers right limits at every atom, and
    each left limit equals the right limit at the preceding grid point (or
    zero before the first one).
    """
    d1, d2 = _common_mode(d1, d2)
    x1, x2 = d1.locations, d2.locations
    c1, c2 = d1.cumulative, d2.cumulative
    i = j = 0
    f1 = f2 = 0
    best = 0
    while i < len(x1) or j < len(x2):
        if j == len(x2) or (i < len(x1) and x1[i] < x2[j]):
            f1 = c1[i]
            i += 1
        elif i == len(x1) or x2[j] < x1[i]:
            f2 = c2[j]
            j += 1
        else:
            f1, f2 = c1[i], c2[j]
            i += 1
            j += 1
        best = max(best, abs(f1 - f2))
    return best


def moment_norm(d: DiscreteDistribution, q) -> float:
    """``(E|Z|^q)^{1/q}``."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return float(d.abs_moment(q)) ** (1.0 / q)


def ks_from_dp(M, dp_value, p) -> float:
    """Upper bound ``(p+1)^{1/(p+1)} (M d_p)^{p/(p+1)}`` on the KS distance
    to a law with density bounded by ``M``."""
    if M < 0 or dp_value < 0 or p < 1:
        raise ValueError("need M >= 0, dp_value >= 0 and p >= 1")
    return (p + 1) ** (1 / (p + 1)) * (M * dp_value) ** (p / (p + 1))


def lattice_ks_lower(a, sigma_Z) -> float:
    """Lower bound ``1/(12 a sigma_Z + 8)`` on the KS distance between a
    continuous law and a law supported on a lattice of span ``1/a``."""
    if a <= 0:
        raise ValueError("a must be positive")
    if sigma_Z < 0:
        raise ValueError("sigma_Z must be nonnegative")
    return 1.0 / (12 * a * sigma_Z + 8)


def integer_mass_lower(sigma_Z) -> float:
    """Guaranteed largest point mass ``1/(6 sigma_Z + 4)`` of an
    integer-valued law with standard deviation ``sigma_Z``."""
    if sigma_Z < 0:
        raise ValueError("sigma_Z must be nonnegative")
    return 1.0 / (6 * sigma_Z + 4)


def sqrt_sum_le(x2, y2, z2) -> bool:
    """Exact test of ``sqrt(x2) <= sqrt(y2) + sqrt(z2)`` for rationals >= 0."""
    lhs = Fraction(x2) - Fraction(y2) - Fraction(z2)
    return lhs <= 0 or lhs * lhs <= 4 * Fraction(y2) * Fraction(z2)


def _convolve(*laws: DiscreteDistribution) -> DiscreteDistribution:
    out = {Fraction(0): Fraction(1)}
    for law in laws:
        nxt: dict = {}
        for x, m in out.items():
            for y, w in law.atoms:
                nxt[x + y] = nxt.get(x + y, 0) + m * w
        out = nxt
    return DiscreteDistribution.from_pairs(out.items(), exact=True)


def three_variable_bound(z1, z2, z3, p: int) -> tuple:
    """Both sides of the moment inequality for independent ``Z1, Z2, Z3``::

        E|Z1+Z2+Z3|^p <= E|Z1|^p + E|Z2|^p
                         + (||Z1||_{p-1} + ||Z2||_{p-1} + ||Z3||_p)^p

    The left side comes from the exact law of the sum.
    """
    if p < 2 or int(p) != p:
        raise ValueError("p must be an integer >= 2")
    lhs = _convolve(z1, z2, z3).abs_moment(p)
    rhs = (
        float(z1.abs_moment(p))
        + float(z2.abs_moment(p))
        + (moment_norm(z1, p - 1) + moment_norm(z2, p - 1) + moment_norm(z3, p)) ** p
    )
    return lhs, rhs
