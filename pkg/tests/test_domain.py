from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from uplift_sig import (
    CampaignPair,
    DegenerateGroup,
    SubgroupCounts,
    ValidationError,
    derive_estimates,
    response_rate,
    uplift,
    uplift_based_responses,
)

import exact_oracle
from conftest import TABLE2


@st.composite
def subgroups(draw, max_size=10_000, min_size=1):
    n = draw(st.integers(min_size, max_size))
    k = draw(st.integers(min_size, max_size))
    return SubgroupCounts(n, k, draw(st.integers(0, n)), draw(st.integers(0, k)))


@st.composite
def pairs(draw, max_size=10_000):
    return CampaignPair(draw(subgroups(max_size)), draw(subgroups(max_size)))


class TestSubgroupCounts:
    def test_rejects_responders_above_size(self):
        with pytest.raises(ValidationError):
            SubgroupCounts(n=10, k=10, a_T=11, a_C=0)
        with pytest.raises(ValidationError):
            SubgroupCounts(n=10, k=10, a_T=0, a_C=11)

    @pytest.mark.parametrize("bad", [2.5, -1, "3", True])
    def test_rejects_non_counts(self, bad):
        with pytest.raises(ValidationError):
            SubgroupCounts(n=10, k=10, a_T=bad, a_C=0)

    def test_integral_float_is_accepted(self):
        assert SubgroupCounts(10.0, 5, 1, 1).n == 10

    def test_pair_totals(self, table2):
        assert table2.n == 81770 + 85257 == 167027
        assert table2.k == 6391 + 6699 == 13090
        assert table2.a_T == 11887
        assert table2.a_C == 816


class TestRates:
    def test_women_target_rate(self):
        assert round(response_rate(5656, 81770), 4) == 0.0692

    def test_men_control_rate(self):
        assert round(response_rate(443, 6699), 4) == 0.0661

    def test_zero_responses(self):
        assert response_rate(0, 100) == 0.0

    def test_empty_group(self):
        with pytest.raises(DegenerateGroup):
            response_rate(0, 0)

    def test_uplift_women(self, table2):
        assert round(uplift(table2.sub1), 4) == 0.0108

    def test_uplift_campaign2(self, table3):
        assert round(uplift(table3.sub2), 4) == 0.0161

    def test_uplift_identical_rates(self):
        assert uplift(SubgroupCounts(n=100, k=100, a_T=10, a_C=10)) == 0.0

    def test_uplift_empty_control(self):
        with pytest.raises(DegenerateGroup):
            uplift(SubgroupCounts(n=100, k=0, a_T=10, a_C=0))


class TestUpliftBasedResponses:
    def test_hand_value(self):
        assert uplift_based_responses(SubgroupCounts(n=100, k=50, a_T=20, a_C=5)) == 10.0

    def test_zero(self):
        assert uplift_based_responses(SubgroupCounts(n=100, k=50, a_T=10, a_C=5)) == 0.0

    def test_women_against_exact(self, table2):
        exact = 5656 - Fraction(81770, 6391) * 373
        assert uplift_based_responses(table2.sub1) == pytest.approx(float(exact), rel=1e-12)

    def test_empty_control(self):
        with pytest.raises(DegenerateGroup):
            uplift_based_responses(SubgroupCounts(n=1, k=0, a_T=0, a_C=0))


class TestDeriveEstimates:
    def test_table2_against_exact(self, table2):
        est = derive_estimates(table2)
        exact = exact_oracle.estimates(*TABLE2)
        for name, value in exact.items():
            assert getattr(est, name) == pytest.approx(float(value), rel=1e-9), name

    def test_symmetric_pair_residuals_vanish(self, symmetric_pair):
        est = derive_estimates(symmetric_pair)
        assert est.l1 - est.e1 == pytest.approx(0, abs=1e-9)
        assert est.l2 - est.e2 == pytest.approx(0, abs=1e-9)

    def test_empty_group(self):
        pair = CampaignPair(SubgroupCounts(10, 0, 1, 0), SubgroupCounts(10, 5, 1, 1))
        with pytest.raises(DegenerateGroup):
            derive_estimates(pair)

    def test_degenerate_flag(self):
        pair = CampaignPair.from_counts(10, 0, 10, 3, 10, 4, 10, 3)
        assert derive_estimates(pair).degenerate
        assert not derive_estimates(CampaignPair.from_counts(10, 1, 10, 3, 10, 4, 10, 3)).degenerate

    def test_natural_control_is_pooled_rate(self, table3):
        est = derive_estimates(table3, natural_control=True)
        assert est.pC == table3.a_C / table3.k

    def test_l_total(self, table2):
        est = derive_estimates(table2)
        assert est.l_total == est.l1 + est.l2


@given(pairs())
@settings(max_examples=300)
def test_antisymmetry(pair):
    est = derive_estimates(pair)
    d1 = est.l1 - est.e1
    d2 = est.l2 - est.e2
    assert abs(d1 + d2) <= 1e-9 * max(1.0, abs(d1))


@given(pairs())
def test_unified_target_rate_is_weighted_mean(pair):
    est = derive_estimates(pair)
    n1, n2, n = pair.sub1.n, pair.sub2.n, pair.n
    assert est.pT == pytest.approx(n1 / n * est.pT1 + n2 / n * est.pT2, rel=1e-12, abs=1e-15)
    assert est.pC == pytest.approx(n1 / n * est.pC1 + n2 / n * est.pC2, rel=1e-12, abs=1e-15)


@given(subgroups(), subgroups(), st.integers(1, 2000), st.integers(1, 2000))
def test_equal_control_rates_give_that_rate(s1, s2, k1, k2):
    # same control rate c = 1/4 in both subgroups, any control sizes
    pair = CampaignPair(
        SubgroupCounts(s1.n, 4 * k1, s1.a_T, k1),
        SubgroupCounts(s2.n, 4 * k2, s2.a_T, k2),
    )
    assert derive_estimates(pair).pC == pytest.approx(0.25, rel=1e-15)


@given(pairs(max_size=2_000), st.integers(2, 50))
def test_scale_property(pair, m):
    a = derive_estimates(pair)
    b = derive_estimates(pair.scaled(m))
    for name in ("pT1", "pT2", "pC1", "pC2", "pT", "pC", "w_n", "f_n"):
        assert getattr(b, name) == pytest.approx(getattr(a, name), rel=1e-12), name
    for name in ("l1", "l2", "e1", "e2", "v1", "v2"):
        assert getattr(b, name) == pytest.approx(m * getattr(a, name), rel=1e-9, abs=1e-6), name


@given(pairs())
def test_estimates_in_range(pair):
    est = derive_estimates(pair)
    for p in (est.pT1, est.pT2, est.pC1, est.pC2, est.pT, est.pC):
        assert 0.0 <= p <= 1.0
    assert est.v1 >= 0 and est.v2 >= 0
    if not est.degenerate:
        assert est.v1 > 0 and est.v2 > 0 and est.w_n > 0 and est.f_n > 0
