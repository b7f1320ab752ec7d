"""Exact and certified tools for the Quicksort comparison count.

Submodules
----------
exact
    Exact law and moments of the comparison count ``X_n``.
toll
    Discrete and limiting toll functions and the toll error ``b_n``.
ledger
    Recursive ``d2`` bound table and the ``A / sqrt(n)`` certificate.
metrics
    Quantile coupling, ``d_p`` and Kolmogorov-Smirnov distances.
limit
    Seeded sampling, empirical laws and density window estimates.
mgf
    Exact moment generating functions and explicit bounds.
verify
    Named check suites used by the ``qslab verify`` command.
"""

from .constants import SIGMA, SIGMA2
from .distribution import DiscreteDistribution, point_mass
from .exact import (
    ComparisonPmf,
    PmfCache,
    ResourceLimitError,
    exact_pmf,
    harmonic,
    mean_comparisons,
    normalize,
    normalized,
    variance_comparisons,
)
from .ledger import build_ledger, certify_d2, refine_constant
from .limit import SampleBatch, density_window, empirical_cdf, sample_path_lengths
from .metrics import d2_squared, ks_distance, quantile_coupling, wasserstein_p, wasserstein_p_power
from .mgf import L0, exact_mgf, homer_bound
from .toll import b_n_exact, c_discrete, c_limit

__version__ = "0.1.0"

__all__ = [
    "SIGMA",
    "SIGMA2",
    "DiscreteDistribution",
    "point_mass",
    "ComparisonPmf",
    "PmfCache",
    "ResourceLimitError",
    "exact_pmf",
    "harmonic",
    "mean_comparisons",
    "variance_comparisons",
    "normalize",
    "normalized",
    "build_ledger",
    "certify_d2",
    "refine_constant",
    "SampleBatch",
    "sample_path_lengths",
    "empirical_cdf",
    "density_window",
    "quantile_coupling",
    "wasserstein_p",
    "wasserstein_p_power",
    "d2_squared",
    "ks_distance",
    "L0",
    "exact_mgf",
    "homer_bound",
    "b_n_exact",
    "c_discrete",
    "c_limit",
]
