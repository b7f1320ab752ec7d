"""Monte Carlo laboratory for the limit law of the normalized comparison count.

Comparison counts are sampled as internal path lengths of random binary
search trees.  Each replicate ``r`` draws from its own generator,
``PCG64(SeedSequence(seed, spawn_key=(r,)))``, so a batch is a pure function
of ``(n, reps, seed)`` whatever order replicates are evaluated in.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate

from . import _kernels
from .constants import DENSITY_DERIV_SUP, DENSITY_SUP
from .distribution import DiscreteDistribution
from .exact import ResourceLimitError, exact_pmf, mean_comparisons
from .metrics import ks_distance
from .toll import c_limit

__all__ = [
    "GENERATOR_NAME",
    "SampleBatch",
    "replicate_generator",
    "sample_path_lengths",
    "exhaustive_path_lengths",
    "quicksort_comparisons",
    "EmpiricalCdf",
    "empirical_cdf",
    "DensityEstimate",
    "default_grid",
    "density_window",
    "delta_star",
    "window_error_terms",
    "window_error_bound",
    "dkw_bound",
    "fixed_point_residual",
    "local_limit_probe",
    "MartingaleReport",
    "martingale_increment_check",
]

GENERATOR_NAME = "numpy.PCG64/SeedSequence(seed, spawn_key=(replicate,))"
DEFAULT_BUDGET = 2 * 10**9
DEFAULT_LEAF_CUTOFF = 16


def replicate_generator(seed: int, r: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(r,))))


def _replicate_generators(seed: int, reps: int):
    for child in np.random.SeedSequence(seed).spawn(reps):
        yield np.random.Generator(np.random.PCG64(child))


@dataclass
class SampleBatch:
    n: int
    reps: int
    seed: int | None
    counts: np.ndarray
    generator_name: str = GENERATOR_NAME
    method: str = "split"

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if len(self.counts) != self.reps:
            raise ValueError("counts must have one entry per replicate")
        top = self.n * (self.n - 1) // 2
        if len(self.counts) and (self.counts.min() < 0 or self.counts.max() > top):
            raise ValueError(f"counts outside [0, {top}]")

    def histogram(self) -> dict[int, int]:
        values, freq = np.unique(self.counts, return_counts=True)
        return {int(v): int(f) for v, f in zip(values, freq)}

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "reps": self.reps,
            "seed": self.seed,
            "generator_name": self.generator_name,
            "counts_histogram": {str(k): v for k, v in self.histogram().items()},
        }
        return json.dumps(doc, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> SampleBatch:
        doc = json.loads(text)
        counts = np.repeat(
            np.array([int(k) for k in doc["counts_histogram"]], dtype=np.int64),
            list(doc["counts_histogram"].values()),
        )
        return cls(doc["n"], doc["reps"], doc["seed"], counts, doc["generator_name"])


def _leaf_tables(cutoff: int):
    flat, start, kmin = [], [0] * (cutoff + 2), [0] * (cutoff + 1)
    for s in range(cutoff + 1):
        start[s] = len(flat)
        if s >= 2:
            pmf = exact_pmf(s)
            kmin[s] = pmf.k_min
            acc = Fraction(0)
            for m in pmf.masses:
                acc += m
                flat.append(float(acc))
    start[cutoff + 1] = len(flat)
    return (
        np.array(flat, dtype=np.float64),
        np.array(start, dtype=np.int64),
        np.array(kmin, dtype=np.int64),
    )


def sample_path_lengths(
    n: int,
    reps: int,
    seed: int,
    method: str = "split",
    leaf_cutoff: int = DEFAULT_LEAF_CUTOFF,
    budget: int = DEFAULT_BUDGET,
) -> SampleBatch:
    """Sample ``reps`` internal path lengths of random BSTs on ``n`` keys.

    ``method="insert"`` inserts a uniform random permutation key by key.
    ``method="split"`` (default) grows the same random tree by recursive
    uniform root choice and takes subtrees of at most ``leaf_cutoff`` nodes
    from their exact law; it costs ``O(n / leaf_cutoff)`` per replicate.
    """
    if n < 0 or reps < 1:
        raise ValueError("need n >= 0 and reps >= 1")
    if seed is None:
        raise ValueError("a seed is required")
    if n * reps > budget:
        raise ResourceLimitError(f"n*reps={n * reps} exceeds the sampling budget {budget}")
    counts = np.empty(reps, dtype=np.int64)
    if method == "split":
        tables = _leaf_tables(leaf_cutoff)
        for r, gen in enumerate(_replicate_generators(seed, reps)):
            counts[r] = _kernels.split_path_length(gen, n, leaf_cutoff, *tables)
    elif method == "insert":
        for r, gen in enumerate(_replicate_generators(seed, reps)):
            counts[r] = _kernels.insertion_path_lengths(gen, n)[-1] if n else 0
    else:
        raise ValueError(f"unknown method {method!r}")
    return SampleBatch(n, reps, seed, counts, method=method)


def exhaustive_path_lengths(n: int) -> dict[int, Fraction]:
    """Exact law of the path length over all ``n!`` insertion orders."""
    if n > 9:
        raise ResourceLimitError("exhaustive enumeration is limited to n <= 9")
    hist = Counter(
        int(_kernels.path_length_of_order(np.array(p, dtype=np.int64)))
        for p in itertools.permutations(range(n))
    )
    total = math.factorial(n)
    return {k: Fraction(v, total) for k, v in sorted(hist.items())}


def quicksort_comparisons(keys, rng: np.random.Generator) -> int:
    """Comparisons made by randomized Quicksort on distinct ``keys``."""
    if len(keys) > 1000:
        raise ResourceLimitError("the literal Quicksort oracle is limited to 1000 keys")
    count = 0
    stack = [list(keys)]
    while stack:
        arr = stack.pop()
        if len(arr) < 2:
            continue
        pivot = arr[int(rng.integers(len(arr)))]
        lo, hi = [], []
        for x in arr:
            if x == pivot:
                continue
            count += 1
            (lo if x < pivot else hi).append(x)
        stack += [lo, hi]
    return count


@dataclass(frozen=True)
class EmpiricalCdf(DiscreteDistribution):
    """Empirical law of ``(X_n - mu_n)/n`` from a sample batch (exact atoms)."""

    n: int = 0
    seed: int | None = None
    reps: int = 0


def empirical_cdf(batch: SampleBatch) -> EmpiricalCdf:
    mu = mean_comparisons(batch.n)
    hist = batch.histogram()
    div = max(batch.n, 1)
    return EmpiricalCdf(
        tuple((k - mu) / div for k in hist),
        tuple(Fraction(f, batch.reps) for f in hist.values()),
        True,
        True,
        n=batch.n,
        seed=batch.seed,
        reps=batch.reps,
    )


def dkw_bound(reps: int, alpha: float = 1e-3) -> float:
    """DKW band half-width ``sqrt(ln(2/alpha) / (2 reps))``."""
    return math.sqrt(math.log(2 / alpha) / (2 * reps))


# --------------------------------------------------------------------------
# density window


def delta_star(n, M_bar=DENSITY_SUP, M_prime_bar=DENSITY_DERIV_SUP) -> float:
    """Window width ``2 (96 M^2 / M'^3)^{1/6} n^{-1/6}`` balancing the two
    error terms of the window estimator."""
    if n <= 0 or M_bar <= 0 or M_prime_bar <= 0:
        raise ValueError("arguments must be positive")
    return 2 * (96 * M_bar**2 / M_prime_bar**3) ** (1 / 6) * n ** (-1 / 6)


def window_error_terms(n, delta, M_bar=DENSITY_SUP, M_prime_bar=DENSITY_DERIV_SUP):
    """``((96 M^2)^{1/3} / (delta n^{1/3}),  M' delta / 4)``."""
    return (96 * M_bar**2) ** (1 / 3) / (delta * n ** (1 / 3)), M_prime_bar * delta / 4


def window_error_bound(n, delta=None, M_bar=DENSITY_SUP, M_prime_bar=DENSITY_DERIV_SUP):
    if delta is None:
        return (96 * M_bar**2 * M_prime_bar**3) ** (1 / 6) * n ** (-1 / 6)
    return sum(window_error_terms(n, delta, M_bar, M_prime_bar))


def default_grid(lo=-1.5, hi=3.0, points=451) -> np.ndarray:
    return np.linspace(lo, hi, points)


@dataclass
class DensityEstimate:
    grid: np.ndarray
    delta: float
    values: np.ndarray
    error_bound: float
    n: int
    reps: int | None = None
    seed: int | None = None

    def integral(self) -> float:
        return float(integrate.trapezoid(self.values, self.grid))

    def __call__(self, x):
        """Linear interpolation, zero outside the grid."""
        return np.interp(x, self.grid, self.values, left=0.0, right=0.0)

    def csv_rows(self):
        yield ("x", "f_hat", "error_bound", "delta", "n", "reps", "seed")
        for x, v in zip(self.grid, self.values):
            yield (float(x), float(v), self.error_bound, self.delta, self.n, self.reps, self.seed)


def density_window(
    cdf: DiscreteDistribution,
    grid=None,
    delta=None,
    M_bar=DENSITY_SUP,
    M_prime_bar=DENSITY_DERIV_SUP,
    n: int | None = None,
) -> DensityEstimate:
    """Window estimate ``(F(x + delta/2) - F(x - delta/2)) / delta``.

    ``cdf`` may be an exact normalized law or an empirical one; ``n`` is
    read from it when it carries one.  ``delta`` defaults to
    :func:`delta_star`.
    """
    n = n or getattr(cdf, "n", None)
    if not n:
        raise ValueError("the source size n is required")
    if delta is None:
        delta = delta_star(n, M_bar, M_prime_bar)
    if delta <= 0:
        raise ValueError("delta must be positive")
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    values = (cdf.cdf(grid + delta / 2) - cdf.cdf(grid - delta / 2)) / delta
    return DensityEstimate(
        grid,
        float(delta),
        np.asarray(values, dtype=float),
        window_error_bound(n, delta, M_bar, M_prime_bar),
        n,
        getattr(cdf, "reps", None) or None,
        getattr(cdf, "seed", None),
    )


# --------------------------------------------------------------------------
# fixed point and local limit diagnostics


def fixed_point_residual(surrogate: DiscreteDistribution, reps: int, seed: int) -> float:
    """KS distance between the surrogate and the sampled law of
    ``U Y + (1-U) Y* + C(U)`` with ``Y, Y*`` drawn from the surrogate."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    locs = np.array([float(x) for x in surrogate.locations])
    cum = np.array([float(c) for c in surrogate.cumulative])
    cum[-1] = 1.0
    u = rng.random(reps)
    y1 = locs[np.searchsorted(cum, rng.random(reps), side="right")]
    y2 = locs[np.searchsorted(cum, rng.random(reps), side="right")]
    toll = np.array([c_limit(v) for v in u])
    sample = u * y1 + (1 - u) * y2 + toll
    return float(ks_distance(DiscreteDistribution.from_samples(sample), surrogate))


def local_limit_probe(n: int, density: DensityEstimate) -> list[dict]:
    """Rows ``(k, n P(X_n = k), f_hat((k - mu_n)/n), gap)``; diagnostic only."""
    pmf = exact_pmf(n)
    mu = mean_comparisons(n)
    lo, hi = density.grid[0], density.grid[-1]
    rows = []
    for k, m in pmf.items():
        x = float((k - mu) / n)
        f_hat = float(density(x))
        scaled = float(n * m)
        rows.append(
            {
                "k": k,
                "scaled_mass": scaled,
                "f_hat": f_hat,
                "gap": scaled - f_hat,
                "in_grid": bool(lo <= x <= hi),
            }
        )
    return rows


@dataclass
class MartingaleReport:
    n: int
    reps: int
    seed: int
    mean: float
    stderr: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = abs(self.mean) <= max(4 * self.stderr, 1e-12)


def martingale_increment_check(n: int, reps: int, seed: int) -> MartingaleReport:
    """Mean of ``Yhat_{n+1} - Yhat_n`` along growing random BSTs.

    ``Yhat_n = (X_n - mu_n)/(n+1)`` is a martingale, so the mean increment
    should sit within 4 standard errors of zero.
    """
    if n < 1:
        raise ValueError("n must be positive")
    mu0, mu1 = float(mean_comparisons(n)), float(mean_comparisons(n + 1))
    inc = np.empty(reps)
    for r, gen in enumerate(_replicate_generators(seed, reps)):
        path = _kernels.insertion_path_lengths(gen, n + 1)
        inc[r] = (path[n] - mu1) / (n + 2) - (path[n - 1] - mu0) / (n + 1)
    stderr = float(inc.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    return MartingaleReport(n, reps, seed, float(inc.mean()), stderr)
