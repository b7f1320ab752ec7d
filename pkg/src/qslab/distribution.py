"""Finite discrete distributions on the real line.

A :class:`DiscreteDistribution` is an immutable sorted list of atoms.  In
*exact* mode locations and masses are :class:`fractions.Fraction`; in
*floating* mode locations are floats (masses may still be exact).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = ["DiscreteDistribution", "point_mass"]

FLOAT_MASS_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteDistribution:
    """Sorted atoms ``(location, mass)`` with strictly increasing locations.

    Parameters
    ----------
    locations : sequence
        Strictly increasing atom locations.
    masses : sequence
        Positive masses summing to one.
    exact : bool
        ``True`` when every location and mass is a ``Fraction``.
    """

    locations: tuple
    masses: tuple
    exact: bool = True
    _validated: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        locs = tuple(self.locations)
        ms = tuple(self.masses)
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "masses", ms)
        if len(locs) != len(ms) or not locs:
            raise ValueError("need the same positive number of locations and masses")
        if self._validated:
            return
        if any(m <= 0 for m in ms):
            raise ValueError("masses must be positive")
        if any(b <= a for a, b in zip(locs, locs[1:])):
            raise ValueError("locations must be strictly increasing")
        if self.exact:
            if not all(isinstance(x, (Fraction, int)) for x in locs + ms):
                raise TypeError("exact mode requires rational locations and masses")
            if sum(ms) != 1:
                raise ValueError(f"masses sum to {sum(ms)}, not 1")
        elif abs(math.fsum(float(m) for m in ms) - 1.0) >= FLOAT_MASS_TOL:
            raise ValueError("masses do not sum to 1")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple], exact: bool | None = None):
        """Build from unsorted ``(location, mass)`` pairs, merging repeats and
        dropping zero masses."""
        acc: dict = {}
        for x, m in pairs:
            acc[x] = acc.get(x, 0) + m
        items = sorted((x, m) for x, m in acc.items() if m != 0)
        if exact is None:
            exact = all(isinstance(v, (Fraction, int)) for kv in items for v in kv)
        if exact:
            items = [(Fraction(x), Fraction(m)) for x, m in items]
        return cls(tuple(x for x, _ in items), tuple(m for _, m in items), exact)

    @classmethod
    def from_samples(cls, samples: Sequence[float]):
        """Empirical law of a float sample, each draw weighted ``1/len``."""
        values, counts = np.unique(np.asarray(samples, dtype=float), return_counts=True)
        total = int(counts.sum())
        return cls(
            tuple(float(v) for v in values),
            tuple(Fraction(int(c), total) for c in counts),
            exact=False,
        )

    def __len__(self):
        return len(self.locations)

    @property
    def atoms(self):
        return list(zip(self.locations, self.masses))

    def to_float(self) -> DiscreteDistribution:
        if not self.exact:
            return self
        return DiscreteDistribution(
            tuple(float(x) for x in self.locations), self.masses, False, True
        )

    @cached_property
    def cumulative(self) -> tuple:
        out, s = [], 0
        for m in self.masses:
            s += m
            out.append(s)
        return tuple(out)

    @cached_property
    def _float_arrays(self):
        return (
            np.array([float(x) for x in self.locations]),
            np.array([float(c) for c in self.cumulative]),
        )

    def cdf(self, x):
        """``P(Z <= x)``; exact when both the law and ``x`` are exact."""
        if self.exact and isinstance(x, (Fraction, int)):
            i = bisect.bisect_right(self.locations, x)
            return self.cumulative[i - 1] if i else Fraction(0)
        locs, cum = self._float_arrays
        idx = np.searchsorted(locs, np.asarray(x, dtype=float), side="right")
        vals = np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)
        return vals if np.ndim(x) else float(vals)

    def mean(self):
        return sum(m * x for x, m in zip(self.locations, self.masses))

    def variance(self):
        mu = self.mean()
        return sum(m * (x - mu) ** 2 for x, m in zip(self.locations, self.masses))

    def abs_moment(self, q):
        """``E|Z|^q``; exact for integer ``q`` in exact mode."""
        if self.exact and float(q).is_integer():
            q = int(q)
            return sum(m * abs(x) ** q for x, m in zip(self.locations, self.masses))
        return math.fsum(float(m) * abs(float(x)) ** q for x, m in self.atoms)

    def max_mass(self):
        return max(self.masses)

    def scaled(self, factor) -> DiscreteDistribution:
        """Law of ``factor * Z`` for ``factor > 0``."""
        if factor <= 0:
            raise ValueError("factor must be positive")
        return DiscreteDistribution(
            tuple(factor * x for x in self.locations), self.masses, self.exact, True
        )


def point_mass(x=Fraction(0)) -> DiscreteDistribution:
    exact = isinstance(x, (Fraction, int))
    return DiscreteDistribution((Fraction(x) if exact else x,), (Fraction(1),), exact)
