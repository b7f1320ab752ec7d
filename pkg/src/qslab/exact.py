"""Exact law and moments of the Quicksort comparison count.

Everything here is exact rational arithmetic.  The law of ``X_n`` is kept
internally as integer permutation counts ``c_n(k) = n! P(X_n = k)``, which
satisfy the integer form of the pivot-mixture recurrence::

    c_n = z^(n-1) * sum_i binom(n-1, i-1) c_(i-1) * c_(n-i)

Convolutions are done by Kronecker substitution (packing a coefficient list
into one big integer), so the products run at big-integer multiplication
speed.
"""

from __future__ import annotations

import json
import logging
import math
import os
import threading
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .distribution import DiscreteDistribution

__all__ = [
    "ResourceLimitError",
    "HarmonicTable",
    "harmonic",
    "mean_comparisons",
    "variance_comparisons",
    "ComparisonPmf",
    "PmfCache",
    "exact_pmf",
    "default_cache",
    "set_default_cache",
    "NormalizedAtoms",
    "normalize",
    "normalized",
    "format_rational",
    "parse_rational",
    "float_down",
    "float_up",
    "DEFAULT_N_MAX",
]

log = logging.getLogger(__name__)

DEFAULT_N_MAX = 50
CACHE_ENV = "QSLAB_CACHE_DIR"


class ResourceLimitError(RuntimeError):
    """A request exceeds a configured computational cap."""


# --------------------------------------------------------------------------
# rationals


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    num, _, den = s.partition("/")
    q = Fraction(int(num), int(den or 1))
    if den and format_rational(q) != s:
        raise ValueError(f"{s!r} is not in lowest terms")
    return q


def float_down(q) -> float:
    """Largest float not exceeding ``q``."""
    f = float(q)
    return math.nextafter(f, -math.inf) if Fraction(f) > q else f


def float_up(q) -> float:
    """Smallest float not below ``q``."""
    f = float(q)
    return math.nextafter(f, math.inf) if Fraction(f) < q else f


# --------------------------------------------------------------------------
# harmonic numbers and moments


class HarmonicTable:
    """Growable table of ``H_n`` and ``H_n^(2)`` as exact rationals."""

    def __init__(self, max_n: int = 1):
        self.H = [Fraction(0)]
        self.H2 = [Fraction(0)]
        self._lock = threading.Lock()
        self.extend(max_n)

    @property
    def max_n(self) -> int:
        return len(self.H) - 1

    def extend(self, n: int) -> None:
        with self._lock:
            for k in range(len(self.H), n + 1):
                self.H.append(self.H[-1] + Fraction(1, k))
                self.H2.append(self.H2[-1] + Fraction(1, k * k))

    def __getitem__(self, n: int) -> tuple[Fraction, Fraction]:
        if n > self.max_n:
            self.extend(n)
        return self.H[n], self.H2[n]


_HARMONIC = HarmonicTable()


def harmonic(n: int) -> tuple[Fraction, Fraction]:
    """Return ``(H_n, H_n^(2))``, the partial sums of ``1/k`` and ``1/k^2``."""
    if n < 1:
        raise ValueError("harmonic numbers are defined for n >= 1")
    return _HARMONIC[n]


def mean_comparisons(n: int) -> Fraction:
    """Exact mean ``2(n+1)H_n - 4n`` of the comparison count (0 for n = 0)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Fraction(0)
    return 2 * (n + 1) * harmonic(n)[0] - 4 * n


def variance_comparisons(n: int) -> Fraction:
    """Exact variance ``7n^2 - 4(n+1)^2 H_n^(2) - 2(n+1)H_n + 13n``."""
    if n < 1:
        raise ValueError("n must be positive")
    h, h2 = harmonic(n)
    return 7 * n * n - 4 * (n + 1) ** 2 * h2 - 2 * (n + 1) * h + 13 * n


# --------------------------------------------------------------------------
# the exact law


@dataclass(frozen=True)
class ComparisonPmf:
    """Exact law of ``X_n``: ``masses[j] = P(X_n = k_min + j)``."""

    n: int
    k_min: int
    masses: tuple

    @property
    def k_max(self) -> int:
        return self.k_min + len(self.masses) - 1

    def support(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def prob(self, k: int) -> Fraction:
        j = k - self.k_min
        return self.masses[j] if 0 <= j < len(self.masses) else Fraction(0)

    def items(self):
        return zip(self.support(), self.masses)

    def mean(self) -> Fraction:
        return sum(k * m for k, m in self.items())

    def variance(self) -> Fraction:
        mu = self.mean()
        return sum(m * (k - mu) ** 2 for k, m in self.items())

    def max_mass(self) -> Fraction:
        return max(self.masses)

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "k_min": self.k_min,
            "masses": [format_rational(m) for m in self.masses],
        }
        return json.dumps(doc, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> ComparisonPmf:
        doc = json.loads(text)
        return cls(doc["n"], doc["k_min"], tuple(parse_rational(s) for s in doc["masses"]))


def _pack(coeffs: list[int], nbytes: int) -> int:
    return int.from_bytes(b"".join(c.to_bytes(nbytes, "little") for c in coeffs), "little")


def _unpack(value: int, length: int, nbytes: int) -> list[int]:
    raw = value.to_bytes(length * nbytes, "little")
    return [int.from_bytes(raw[i : i + nbytes], "little") for i in range(0, len(raw), nbytes)]


class PmfCache:
    """Bottom-up memoized exact laws of ``X_0 .. X_{n_max}``.

    Parameters
    ----------
    n_max : int
        Largest ``n`` that may be requested.  Support size grows like
        ``n^2/2`` and total work roughly like ``n^5`` digit operations, so
        values far beyond 100 get slow.
    cache_dir : path, optional
        Directory holding ``pmf_<n>.json`` files.  Defaults to the
        ``QSLAB_CACHE_DIR`` environment variable when set.
    """

    def __init__(self, n_max: int = DEFAULT_N_MAX, cache_dir=None):
        if n_max > 200:
            warnings.warn(
                f"n_max={n_max}: exact laws above n=200 take a long time to build",
                stacklevel=2,
            )
        self.n_max = n_max
        if cache_dir is None:
            cache_dir = os.environ.get(CACHE_ENV) or None
        self.cache_dir = Path(cache_dir) if cache_dir else None
        # counts[n] lists c_n(k) for k = 0 .. n(n-1)/2
        self._counts: list[list[int]] = [[1], [1]]
        self._pmfs: dict[int, ComparisonPmf] = {}
        self._lock = threading.Lock()

    def _check(self, n: int) -> None:
        if n < 0:
            raise ValueError("n must be nonnegative")
        if n > self.n_max:
            raise ResourceLimitError(
                f"n={n} exceeds the configured cap n_max={self.n_max}"
            )

    def counts(self, n: int) -> list[int]:
        """Integer counts ``n! P(X_n = k)`` for ``k = 0 .. n(n-1)/2``."""
        self._check(n)
        with self._lock:
            while len(self._counts) <= n:
                self._counts.append(self._next_counts(len(self._counts)))
        return self._counts[n]

    def _next_counts(self, n: int) -> list[int]:
        nbytes = (math.factorial(n).bit_length() + 8) // 8 + 1
        packed = [_pack(c, nbytes) for c in self._counts[:n]]
        total = 0
        # pivots i and n+1-i give the same product; fold them together
        for i in range(1, n // 2 + 1):
            total += 2 * math.comb(n - 1, i - 1) * packed[i - 1] * packed[n - i]
        if n % 2:
            m = (n + 1) // 2
            total += math.comb(n - 1, m - 1) * packed[m - 1] * packed[n - m]
        length = (n - 1) * (n - 2) // 2 + 1
        return [0] * (n - 1) + _unpack(total, length, nbytes)

    def pmf(self, n: int) -> ComparisonPmf:
        self._check(n)
        if n in self._pmfs:
            return self._pmfs[n]
        pmf = self._load(n)
        if pmf is None:
            counts = self.counts(n)
            k_min = next(k for k, c in enumerate(counts) if c)
            total = math.factorial(n)
            pmf = ComparisonPmf(n, k_min, tuple(Fraction(c, total) for c in counts[k_min:]))
            self._store(pmf)
        self._pmfs[n] = pmf
        return pmf

    def _path(self, n: int) -> Path | None:
        return self.cache_dir / f"pmf_{n}.json" if self.cache_dir else None

    def _load(self, n: int) -> ComparisonPmf | None:
        path = self._path(n)
        if path is None or not path.exists():
            return None
        log.debug("loading cached pmf from %s", path)
        return ComparisonPmf.from_json(path.read_text())

    def _store(self, pmf: ComparisonPmf) -> None:
        path = self._path(pmf.n)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(pmf.to_json())
        tmp.replace(path)


_DEFAULT_CACHE: PmfCache | None = None


def default_cache() -> PmfCache:
    global _DEFAULT_CACHE
    if _DEFAULT_CACHE is None:
        _DEFAULT_CACHE = PmfCache()
    return _DEFAULT_CACHE


def set_default_cache(cache: PmfCache) -> None:
    """Replace the process-wide cache used when no cache is passed."""
    global _DEFAULT_CACHE
    _DEFAULT_CACHE = cache


def exact_pmf(n: int, cache: PmfCache | None = None) -> ComparisonPmf:
    """Exact law of the comparison count ``X_n``."""
    return (cache or default_cache()).pmf(n)


# --------------------------------------------------------------------------
# normalized laws

SCALINGS = ("Y", "Y-hat")


@dataclass(frozen=True)
class NormalizedAtoms(DiscreteDistribution):
    """Law of ``(X_n - mu_n)/n`` (scaling ``"Y"``) or ``/(n+1)`` (``"Y-hat"``)."""

    n: int = 0
    scaling: str = "Y"


def normalize(pmf: ComparisonPmf, scaling: str = "Y") -> NormalizedAtoms:
    if scaling not in SCALINGS:
        raise ValueError(f"scaling must be one of {SCALINGS}")
    if pmf.n < 1:
        raise ValueError("normalization needs n >= 1")
    mu = mean_comparisons(pmf.n)
    div = pmf.n if scaling == "Y" else pmf.n + 1
    pairs = [((k - mu) / div, m) for k, m in pmf.items() if m]
    return NormalizedAtoms(
        tuple(x for x, _ in pairs),
        tuple(m for _, m in pairs),
        True,
        True,
        n=pmf.n,
        scaling=scaling,
    )


def normalized(n: int, scaling: str = "Y", cache: PmfCache | None = None) -> NormalizedAtoms:
    """Shortcut for ``normalize(exact_pmf(n), scaling)``."""
    return normalize(exact_pmf(n, cache), scaling)
