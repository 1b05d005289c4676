import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from uplift_sig import InvalidArgument, Rng, chi_sq1_sf, sample_binomial, std_normal_cdf
from uplift_sig.numerics import std_normal_sf

mpmath.mp.dps = 40


def chi_sq1_sf_by_quadrature(x):
    """Upper tail of the chi-square(1) density, integrated numerically."""
    # substitute t = u^2 to remove the 1/sqrt(t) singularity at zero
    density = lambda u: 2.0 * math.exp(-u * u / 2.0) / math.sqrt(2.0 * math.pi)
    value, _ = integrate.quad(density, math.sqrt(x), np.inf, epsabs=1e-14, epsrel=1e-13)
    return value


class TestNormalCdf:
    def test_zero(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_back_solved_p_value(self):
        assert std_normal_cdf(1.9663) == pytest.approx(0.97535, abs=5e-5)
        assert std_normal_cdf(1.9663) == pytest.approx(float(mpmath.ncdf(1.9663)), abs=1e-12)
        assert 2 * (1 - std_normal_cdf(1.9663)) == pytest.approx(0.0493, abs=5e-5)

    @pytest.mark.parametrize("x", [-8.0, -3.1, -1.0, -0.2, 0.3, 1.5, 2.7, 5.0, 8.0])
    def test_against_high_precision(self, x):
        assert abs(std_normal_cdf(x) - float(mpmath.ncdf(x))) <= 1e-12

    def test_symmetry_grid(self):
        for x in np.linspace(-10, 10, 1000):
            x = float(x)
            assert abs(std_normal_cdf(-x) - (1 - std_normal_cdf(x))) <= 1e-14

    @pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
    def test_non_finite(self, bad):
        with pytest.raises(InvalidArgument):
            std_normal_cdf(bad)

    def test_sf_keeps_tail_precision(self):
        assert std_normal_sf(10.0) == pytest.approx(float(mpmath.ncdf(-10)), rel=1e-12)


class TestChiSq1Sf:
    def test_zero(self):
        assert chi_sq1_sf(0.0) == 1.0

    def test_reported_p_value(self):
        assert chi_sq1_sf(0.7643) == pytest.approx(0.3820, abs=5e-4)

    def test_critical_value_against_quadrature(self):
        oracle = chi_sq1_sf_by_quadrature(3.841459)
        assert oracle == pytest.approx(0.05, abs=1e-6)
        assert chi_sq1_sf(3.841459) == pytest.approx(oracle, abs=1e-12)

    @pytest.mark.parametrize("x", [0.01, 0.5, 1.0, 2.5, 6.63, 10.0, 25.0])
    def test_against_quadrature(self, x):
        assert abs(chi_sq1_sf(x) - chi_sq1_sf_by_quadrature(x)) <= 1e-12

    def test_negative(self):
        with pytest.raises(InvalidArgument):
            chi_sq1_sf(-0.1)

    def test_matches_normal_tail_identity(self):
        for x in np.linspace(0, 50, 501):
            x = float(x)
            assert abs(chi_sq1_sf(x) - 2 * (1 - std_normal_cdf(math.sqrt(x)))) <= 1e-14

    @given(st.floats(0, 100), st.floats(0, 100))
    def test_monotone_decreasing(self, a, b):
        lo, hi = sorted((a, b))
        assert chi_sq1_sf(lo) >= chi_sq1_sf(hi)

    def test_strictly_decreasing_on_grid(self):
        values = [chi_sq1_sf(x) for x in np.linspace(0, 30, 3001)]
        assert all(a > b for a, b in zip(values, values[1:]))


class TestRng:
    def test_seed_zero_is_valid(self):
        assert Rng(0).seed == 0

    @pytest.mark.parametrize("bad", [-1, 1 << 64, 1.5, "7"])
    def test_bad_seed(self, bad):
        with pytest.raises(InvalidArgument):
            Rng(bad)

    def test_equal_seeds_equal_sequences(self):
        a, b = Rng(12345), Rng(12345)
        assert [sample_binomial(a, 1000, 0.3) for _ in range(100)] == [sample_binomial(b, 1000, 0.3) for _ in range(100)]

    def test_children_are_keyed_not_sequential(self):
        master = Rng(9)
        direct = sample_binomial(Rng(9).child(5), 10_000, 0.4)
        for i in range(5):
            sample_binomial(master.child(i), 10_000, 0.4)
        assert sample_binomial(master.child(5), 10_000, 0.4) == direct

    def test_distinct_children_differ(self):
        draws = {sample_binomial(Rng(1).child(i), 10**6, 0.5) for i in range(20)}
        assert len(draws) > 15

    def test_frozen_sequence(self):
        # guards against silent changes of the generator
        rng = Rng(2014)
        assert [sample_binomial(rng, 100, 0.5) for _ in range(5)] == FROZEN_2014


FROZEN_2014 = [51, 47, 51, 46, 50]


class TestBinomial:
    def test_p_zero(self):
        assert sample_binomial(Rng(3), 500, 0.0) == 0

    def test_p_one(self):
        assert sample_binomial(Rng(3), 500, 1.0) == 500

    @pytest.mark.parametrize("p", [-0.01, 1.01, math.nan])
    def test_bad_probability(self, p):
        with pytest.raises(InvalidArgument):
            sample_binomial(Rng(0), 10, p)

    def test_mean_small(self):
        rng = Rng(77)
        draws = [sample_binomial(rng, 100, 0.5) for _ in range(10_000)]
        assert 49.0 <= np.mean(draws) <= 51.0
        assert all(0 <= d <= 100 for d in draws)

    def test_moments_at_campaign_scale(self):
        n, p = 50_000, 0.1
        rng = Rng(4242)
        draws = np.array([sample_binomial(rng, n, p) for _ in range(1000)], dtype=float)
        var = n * p * (1 - p)
        assert abs(draws.mean() - n * p) <= 3 * math.sqrt(var / 1000)
        assert abs(draws.var(ddof=1) - var) <= 0.10 * var

    def test_small_np_distribution(self):
        # inversion regime: compare frequencies with the exact pmf
        from scipy.stats import binom, chisquare

        rng = Rng(5)
        draws = np.array([sample_binomial(rng, 20, 0.05) for _ in range(20_000)])
        support = np.arange(0, 5)
        observed = np.array([(draws == j).sum() for j in support] + [(draws >= 5).sum()])
        probs = np.append(binom.pmf(support, 20, 0.05), binom.sf(4, 20, 0.05))
        assert chisquare(observed, probs * draws.size).pvalue > 0.001
