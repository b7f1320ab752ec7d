import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qslab import exact
from qslab.constants import GAMMA, SIGMA2
from qslab.exact import ComparisonPmf, PmfCache, ResourceLimitError, harmonic, mean_comparisons, variance_comparisons


def brute_pmf(n):
    """Pivot-mixture recursion on dicts, with no packing or folding."""
    laws = [{0: Fraction(1)}, {0: Fraction(1)}]
    for size in range(2, n + 1):
        law = {}
        for i in range(1, size + 1):
            for a, pa in laws[i - 1].items():
                for b, pb in laws[size - i].items():
                    k = a + b + size - 1
                    law[k] = law.get(k, 0) + pa * pb / size
        laws.append(law)
    return laws[n]


class TestHarmonic:
    def test_small_values(self):
        assert harmonic(1) == (1, 1)
        assert harmonic(3) == (Fraction(11, 6), Fraction(49, 36))

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            harmonic(0)

    def test_h100_sandwich(self):
        h = float(harmonic(100)[0])
        assert math.log(100) + GAMMA <= h <= math.log(100) + GAMMA + 1 / 200


class TestMoments:
    @pytest.mark.parametrize(
        "n, mean", [(0, 0), (1, 0), (2, 1), (3, Fraction(8, 3)), (4, Fraction(29, 6))]
    )
    def test_mean(self, n, mean):
        assert mean_comparisons(n) == mean

    def test_mean_alternative_form(self):
        for n in range(1, 60):
            h_next = harmonic(n + 1)[0]
            assert mean_comparisons(n) == 2 * (n + 1) * h_next - 4 * n - 2

    @pytest.mark.parametrize("n, var", [(1, 0), (2, 0), (3, Fraction(2, 9)), (4, Fraction(29, 36))])
    def test_variance(self, n, var):
        assert variance_comparisons(n) == var

    def test_variance_of_y50_below_sigma2(self):
        assert float(variance_comparisons(50) / 2500) < SIGMA2


class TestExactPmf:
    def test_small_laws(self):
        assert dict(exact.exact_pmf(2).items()) == {1: 1}
        assert dict(exact.exact_pmf(3).items()) == {2: Fraction(1, 3), 3: Fraction(2, 3)}
        assert dict(exact.exact_pmf(4).items()) == {4: Fraction(1, 2), 5: Fraction(1, 6), 6: Fraction(1, 3)}

    @pytest.mark.parametrize("n", range(0, 13))
    def test_matches_brute_force_recursion(self, n):
        pmf = exact.exact_pmf(n)
        assert {k: m for k, m in pmf.items() if m} == brute_pmf(n)

    def test_support_extremes(self):
        # fewest comparisons come from perfectly balanced splits, most from n(n-1)/2
        pmf = exact.exact_pmf(7)
        assert pmf.k_min == 10
        assert pmf.k_max == 21
        assert pmf.prob(21) == Fraction(2**6, math.factorial(7))

    def test_counts_are_integers_summing_to_factorial(self, cache):
        for n in range(0, 25):
            assert sum(cache.counts(n)) == math.factorial(n)

    def test_json_round_trip(self):
        pmf = exact.exact_pmf(9)
        text = pmf.to_json()
        assert ComparisonPmf.from_json(text) == pmf
        assert all("/" in s for s in json.loads(text)["masses"])

    def test_cap_is_enforced(self):
        cache = PmfCache(n_max=5)
        with pytest.raises(ResourceLimitError, match="n_max=5"):
            cache.pmf(6)

    def test_large_cap_warns(self):
        with pytest.warns(UserWarning):
            PmfCache(n_max=300)

    def test_disk_cache(self, tmp_path, monkeypatch):
        monkeypatch.setenv("QSLAB_CACHE_DIR", str(tmp_path))
        first = PmfCache(n_max=10).pmf(8)
        assert (tmp_path / "pmf_8.json").exists()
        again = PmfCache(n_max=10)
        assert again._load(8) == first
        assert again.pmf(8) == first


class TestNormalize:
    def test_n2_is_point_mass(self):
        d = exact.normalized(2)
        assert d.locations == (0,) and d.masses == (1,)

    def test_n3_both_scalings(self):
        y = exact.normalized(3)
        assert dict(y.atoms) == {Fraction(-2, 9): Fraction(1, 3), Fraction(1, 9): Fraction(2, 3)}
        yh = exact.normalized(3, "Y-hat")
        assert dict(yh.atoms) == {Fraction(-1, 6): Fraction(1, 3), Fraction(1, 12): Fraction(2, 3)}

    def test_bad_scaling(self):
        with pytest.raises(ValueError):
            exact.normalized(3, "Z")

    @pytest.mark.parametrize("n", [1, 5, 17, 40])
    def test_zero_mean_and_scaled_variance(self, n):
        d = exact.normalized(n)
        assert d.mean() == 0
        assert d.variance() == variance_comparisons(n) / n**2


class TestRationalFormatting:
    @given(st.fractions())
    def test_round_trip(self, q):
        assert exact.parse_rational(exact.format_rational(q)) == q

    def test_rejects_unreduced(self):
        with pytest.raises(ValueError):
            exact.parse_rational("2/4")

    @settings(max_examples=200)
    @given(st.fractions(min_value=-1e6, max_value=1e6))
    def test_directed_rounding(self, q):
        assert Fraction(exact.float_down(q)) <= q <= Fraction(exact.float_up(q))
