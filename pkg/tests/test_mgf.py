import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qslab import exact, mgf

GRID = mgf.LAMBDA_GRID


@pytest.fixture(scope="module")
def hats():
    return {n: exact.normalized(n, "Y-hat") for n in range(1, 41)}


@pytest.fixture(scope="module")
def ys():
    return {n: exact.normalized(n) for n in range(1, 41)}


class TestExactMgf:
    def test_trivial_laws(self):
        for lam in (-2.0, 0.7, 3.0):
            assert mgf.exact_mgf(exact.normalized(1, "Y-hat"), lam) == 1
            assert mgf.exact_mgf(exact.normalized(2, "Y-hat"), lam) == 1

    def test_y3_hat(self):
        expected = math.exp(-1 / 6) / 3 + 2 * math.exp(1 / 12) / 3
        assert mgf.exact_mgf(exact.normalized(3, "Y-hat"), 1) == pytest.approx(expected, rel=1e-15)
        assert expected == pytest.approx(1.00676, abs=5e-6)

    def test_overflow_guard(self):
        with pytest.raises(mgf.MgfOverflowError):
            mgf.exact_mgf(exact.normalized(30), 1e4)

    def test_value_and_slope_at_zero(self, ys):
        h = 1e-4
        for n in (5, 20, 40):
            psi = lambda t: mgf.exact_mgf(ys[n], t)  # noqa: E731
            assert psi(0) == 1
            assert abs(psi(h) - psi(-h)) / (2 * h) < 1e-6
            assert psi(h) + psi(-h) - 2 >= 0


class TestL0:
    def test_value(self):
        assert mgf.L0 == pytest.approx(5.018, abs=5e-4)
        assert abs(math.exp(mgf.L0) - 6 * mgf.L0**2) < 1e-8

    def test_stable_across_brackets(self):
        for lo, hi in ((4.0, 6.0), (4.5, 5.5), (4.9, 7.0)):
            assert mgf.solve_L0(lo, hi) == pytest.approx(mgf.L0, abs=1e-10)

    def test_bad_bracket(self):
        with pytest.raises(ValueError):
            mgf.solve_L0(5.5, 7.0)


class TestBounds:
    def test_homer_pieces(self):
        assert mgf.homer_bound(0) == 1
        assert mgf.homer_bound(1) == pytest.approx(math.exp(12))
        assert mgf.homer_bound(-0.5) == pytest.approx(math.exp(0.125))
        assert mgf.homer_bound(-1) == pytest.approx(math.exp(1.25))
        assert mgf.homer_bound(0.3) == pytest.approx(math.exp(0.09))
        assert mgf.homer_bound(5.5) == pytest.approx(math.exp(2 * math.exp(5.5)))

    def test_breakpoint_takes_smaller_piece(self):
        assert mgf.homer_bound(0.42) == pytest.approx(math.exp(0.42**2))
        assert mgf.homer_bound(-0.62) == pytest.approx(math.exp(0.5 * 0.62**2))

    def test_huge_lambda_is_inf(self):
        assert mgf.homer_bound(20) == math.inf
        assert mgf.log_homer_bound(20) == pytest.approx(2 * math.exp(20))

    def test_corollary(self):
        assert mgf.corollary_bound(10, 0) == 1
        assert mgf.corollary_bound(10, 1) == pytest.approx(math.exp(14.52))
        for lam in (-2.0, 0.3, 1.0):
            assert mgf.log_corollary_bound(10**6, lam) == pytest.approx(mgf.log_homer_bound(lam), abs=1e-4)

    def test_corollary_global_form_dominates(self):
        for n in (1, 5, 40):
            for lam in np.linspace(-3, 3, 25):
                assert mgf.corollary_bound(n, lam) <= mgf.corollary_global_bound(n, lam) * (1 + 1e-12)

    def test_remark(self):
        assert mgf.remark_bound(-1) == pytest.approx(math.exp(1.34))
        assert mgf.remark_bound(0.3) == pytest.approx(math.exp(0.09))
        assert mgf.remark_bound(0) == 1
        assert "not checked" in mgf.REMARK_NOTE

    def test_large_deviation_bound(self):
        for lam in (0.5, 1.0, 2.0):
            values = [mgf.large_dev_bound(n, 0.2, lam) for n in (3, 10, 100, 1000)]
            assert all(v >= 0 for v in values)
            assert all(a > b for a, b in zip(values, values[1:]))
        with pytest.raises(ValueError):
            mgf.large_dev_bound_auto(2, 0.1)
        assert mgf.large_dev_bound_auto(10**6, 0.5) == mgf.large_dev_bound(10**6, 0.5, math.log(math.log(10**6)))

    def test_mean_lower_bound_used_by_ldp(self):
        for n in range(1, 500):
            assert float(exact.mean_comparisons(n)) / (n + 1) >= 2 * math.log(n) - 3

    def test_rate_bound(self):
        assert mgf.mgf_rate_bound(5, 0) == 0
        expected = 1.5 * math.exp(max(24 * 1.01**2 * 0.25, math.exp(1.01))) * 0.1
        assert mgf.mgf_rate_bound(100, 0.5) == pytest.approx(expected, rel=1e-13)

    @given(st.floats(-5, 5), st.integers(1, 1000))
    def test_bounds_at_least_one(self, lam, n):
        assert mgf.homer_bound(lam) >= 1
        assert mgf.corollary_bound(n, lam) >= 1


class TestSweeps:
    def test_monotone_in_n(self, hats):
        for lam in GRID:
            vals = [mgf.exact_mgf(hats[n], lam) for n in range(1, 41)]
            assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_dominated_by_limit_bound(self, hats):
        for n in hats:
            for lam in GRID:
                assert mgf.exact_mgf(hats[n], lam) <= mgf.homer_bound(lam)

    def test_dominated_by_scaled_and_remark_bounds(self, ys):
        for n in ys:
            for lam in GRID:
                value = mgf.exact_mgf(ys[n], lam)
                assert value <= mgf.corollary_bound(n, lam)
                if lam >= -0.58:
                    assert value <= mgf.remark_bound(lam)

    def test_exact_tail_dominated(self):
        for n in range(1, 41):
            pmf = exact.exact_pmf(n)
            for eps in (0.05, 0.1, 0.2, 0.3, 0.4, 0.5):
                tail = exact.float_up(mgf.exact_tail(pmf, eps))
                for lam in (0.5, 1.0, 2.0):
                    assert tail <= mgf.large_dev_bound(n, eps, lam)

    def test_exact_tail_values(self):
        pmf = exact.exact_pmf(3)
        # mu_3 = 8/3: X=2 deviates by 2/3, X=3 by 1/3
        assert mgf.exact_tail(pmf, 0.2) == pytest.approx(1 / 3)
        assert mgf.exact_tail(pmf, 0.1) == 1

    def test_rate_triangle(self, ys):
        for lam in np.linspace(-0.5, 1.0, 7):
            vals = {n: mgf.exact_mgf(ys[n], lam) for n in ys}
            for n in ys:
                for m in ys:
                    assert abs(vals[n] - vals[m]) <= mgf.mgf_rate_bound(n, lam) + mgf.mgf_rate_bound(m, lam)
