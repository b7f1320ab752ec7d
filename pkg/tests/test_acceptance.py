"""Acceptance criteria 1-8, each at its stated tolerance.

Run under pytest for one PASS/FAIL line per criterion in the terminal
summary, or directly with ``python tests/test_acceptance.py``.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
from scipy import integrate

from qslab import exact, ledger, limit, metrics, mgf, toll
from qslab.constants import SIGMA, TOLL_COEF

SEED = 20240611
TOL4 = 5e-5


def quad(f):
    return integrate.quad(f, 0, 1, epsabs=1e-10, epsrel=1e-10, limit=200)[0]


# 1 ---------------------------------------------------------------------------


def test_criterion_1_exact_law_oracle():
    start = time.perf_counter()
    for n in range(1, 41):
        pmf = exact.exact_pmf(n)
        h, h2 = exact.harmonic(n)
        assert sum(pmf.masses) == 1
        assert pmf.mean() == 2 * (n + 1) * h - 4 * n
        assert pmf.variance() == 7 * n * n - 4 * (n + 1) ** 2 * h2 - 2 * (n + 1) * h + 13 * n
    assert time.perf_counter() - start < 300


# 2 ---------------------------------------------------------------------------


def test_criterion_2_d2_constants():
    L = ledger.build_ledger(100)
    vbar, w = (float(v) for v in ledger.partial_sums(L, 100))
    assert abs(vbar - 1.1995) <= TOL4
    assert abs(w - 0.3466) <= TOL4
    assert abs(float(ledger.refine_constant(100, 8, L)) - 2.3332) <= TOL4
    assert abs(float(ledger.refine_constant(100, 2.34, L)) - 1.9976) <= TOL4
    assert abs(float(L.row(100).scaled) - 1.6018) <= 1e-4
    assert float(L.max_scaled(100)) < 1.7
    assert ledger.certify_d2(100, ledger=L).final_A < 2


# 3 ---------------------------------------------------------------------------


def test_criterion_3_toll_error_lemma():
    assert TOLL_COEF < 6.63
    worst = max(n * float(toll.b_n_exact(n).b_n) for n in range(1, 1001))
    assert worst <= 3 + 2 * math.pi / math.sqrt(3)


def test_criterion_3_quadrature_identities():
    assert abs(quad(lambda x: math.log(x) ** 2) - 2) <= 1e-8
    energy = quad(lambda x: (2 * math.log(x) - 2 * math.log1p(-x)) ** 2)
    assert abs(energy - 4 * math.pi**2 / 3) <= 1e-8


# 4 ---------------------------------------------------------------------------


def test_criterion_4_coupling_metrics():
    Y = {n: exact.normalized(n) for n in range(1, 41)}
    assert metrics.d2_squared(Y[3], Y[4]) == Fraction(149, 5184)
    for m in range(1, 41):
        assert metrics.d2_squared(Y[2], Y[m]) == Y[m].variance()

    for n, m in itertools.combinations(range(1, 13), 2):
        powers = [metrics.wasserstein_p_power(Y[n], Y[m], p) for p in (1, 2, 3, 4)]
        for i, j in itertools.combinations(range(4), 2):
            # d_p <= d_q  <=>  (d_p^p)^q <= (d_q^q)^p
            assert powers[i] ** (j + 1) <= powers[j] ** (i + 1)

    keys = range(1, 13)
    d2 = {(a, b): metrics.d2_squared(Y[a], Y[b]) for a in keys for b in keys}
    for a, b, c in itertools.product(keys, repeat=3):
        assert metrics.sqrt_sum_le(d2[a, c], d2[a, b], d2[b, c])

    for z in itertools.product((Y[2], Y[3], Y[4]), repeat=3):
        for p in (2, 3, 4):
            lhs, rhs = metrics.three_variable_bound(*z, p)
            assert exact.float_up(lhs) <= rhs * (1 + 1e-12)

    assert SIGMA * math.sqrt(2) > 0.9168


# 5 ---------------------------------------------------------------------------


def test_criterion_5_ks_ladder():
    y50 = exact.normalized(50)
    for n in range(1, 51):
        ks = float(metrics.ks_distance(exact.normalized(n), y50))
        assert ks <= 15 * n ** (-1 / 3) + 15 * 50 ** (-1 / 3)
    for n in range(1, 41):
        sd = math.sqrt(exact.variance_comparisons(n))
        assert float(exact.exact_pmf(n).max_mass()) >= 1 / (6 * sd + 4)
    assert 12 * SIGMA < 8


# 6 ---------------------------------------------------------------------------


def test_criterion_6_monte_carlo():
    start = time.perf_counter()
    for n in range(0, 7):
        assert limit.exhaustive_path_lengths(n) == {k: m for k, m in exact.exact_pmf(n).items() if m}

    reps = 10**5
    batch = limit.sample_path_lengths(50, reps, SEED)
    ks = metrics.ks_distance(limit.empirical_cdf(batch), exact.normalized(50))
    assert float(ks) <= limit.dkw_bound(reps, alpha=1e-3)

    for n in (10, 25):
        rep = limit.martingale_increment_check(n, reps, SEED)
        assert abs(rep.mean) <= 4 * rep.stderr
    assert time.perf_counter() - start < 120


# 7 ---------------------------------------------------------------------------


def test_criterion_7_density_window():
    n = 10**4
    batch = limit.sample_path_lengths(n, 10**5, SEED)
    grid = limit.default_grid(-1.5, 3.0, 451)
    est = limit.density_window(limit.empirical_cdf(batch), grid, limit.delta_star(n))
    assert np.all(est.values >= 0)
    assert abs(est.integral() - 1) <= 0.02
    assert est.values.max() < 16
    t1, t2 = limit.window_error_terms(n, limit.delta_star(n))
    assert abs(t1 - t2) <= 1e-12 * max(t1, t2)


# 8 ---------------------------------------------------------------------------


def test_criterion_8_mgf_suite():
    grid = mgf.LAMBDA_GRID
    hat = {n: exact.normalized(n, "Y-hat") for n in range(1, 41)}
    Y = {n: exact.normalized(n) for n in range(1, 41)}
    for lam in grid:
        vals = [mgf.exact_mgf(hat[n], lam) for n in range(1, 41)]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))
        assert all(v <= mgf.homer_bound(lam) for v in vals)
        assert all(mgf.exact_mgf(Y[n], lam) <= mgf.corollary_bound(n, lam) for n in Y)

    assert abs(mgf.L0 - 5.018) <= 5e-4

    for n in range(1, 41):
        pmf = exact.exact_pmf(n)
        for eps in (0.05, 0.1, 0.2, 0.3, 0.4, 0.5):
            tail = exact.float_up(mgf.exact_tail(pmf, eps))
            assert all(tail <= mgf.large_dev_bound(n, eps, lam) for lam in (0.5, 1.0, 2.0))

    for lam in np.linspace(-0.5, 1.0, 7):
        vals = {n: mgf.exact_mgf(Y[n], lam) for n in Y}
        for n, m in itertools.product(Y, repeat=2):
            assert abs(vals[n] - vals[m]) <= mgf.mgf_rate_bound(n, lam) + mgf.mgf_rate_bound(m, lam)


if __name__ == "__main__":
    results: dict[int, bool] = {}
    for name, fn in sorted(globals().items()):
        if not name.startswith("test_criterion_"):
            continue
        k = int(name.split("_")[2])
        try:
            fn()
            ok = True
        except AssertionError:
            ok = False
        results[k] = results.get(k, True) and ok
    for k, ok in sorted(results.items()):
        print(f"criterion {k}: {'PASS' if ok else 'FAIL'}")
