import math

import numpy as np
import pytest
from scipy import integrate

from cheaptalk_lab.distributions import (DistributionPair, Family,
                                         StateDistribution, alpha_beta,
                                         density, history_likelihood_ratio,
                                         history_log_likelihood_ratio,
                                         likelihood_ratio, normal_pair, sample)
from cheaptalk_lab.errors import DivergentIntegral, DivisionOutsideSupport

from oracles import normal_ratio_integral


def test_density_peaks():
    assert density(StateDistribution(Family.NORMAL, 0, 1), 0.0) == pytest.approx(
        1.0 / math.sqrt(2 * math.pi), rel=1e-12)
    assert density(StateDistribution(Family.LAPLACE, 0, 1), 0.0) == pytest.approx(0.5)
    assert density(StateDistribution(Family.LOGISTIC, 0, 1), 0.0) == pytest.approx(0.25)


def test_variances_follow_family_formulas():
    assert StateDistribution(Family.NORMAL, 0, 2.0).variance == pytest.approx(4.0)
    assert StateDistribution(Family.LAPLACE, 0, 2.0).variance == pytest.approx(8.0)
    assert StateDistribution(Family.LOGISTIC, 0, 2.0).variance == pytest.approx(
        4.0 * math.pi**2 / 3.0)


def test_scale_must_be_positive():
    with pytest.raises(ValueError):
        StateDistribution(Family.NORMAL, 0, 0.0)
    with pytest.raises(ValueError):
        StateDistribution(Family.LAPLACE, 0, -1.0)


def test_pair_requires_ordered_means():
    with pytest.raises(ValueError):
        normal_pair(1.0, -1.0)


def test_density_integrates_to_one_across_random_parameters():
    rng = np.random.default_rng(7)
    for family in Family:
        for _ in range(6):
            loc = rng.uniform(-4, 4)
            scale = rng.uniform(0.2, 3.0)
            dist = StateDistribution(family, loc, scale)
            total, _ = integrate.quad(dist.density, loc - 60 * scale,
                                      loc + 60 * scale, limit=300)
            assert total == pytest.approx(1.0, abs=1e-8)


def test_density_matches_moments_by_quadrature():
    dist = StateDistribution(Family.LOGISTIC, 0.7, 1.3)
    mean, _ = integrate.quad(lambda t: t * dist.density(t), -200, 200, limit=300)
    var, _ = integrate.quad(lambda t: (t - dist.mean) ** 2 * dist.density(t),
                            -200, 200, limit=300)
    assert mean == pytest.approx(dist.mean, abs=1e-9)
    assert var == pytest.approx(dist.variance, rel=1e-9)


class TestLikelihoodRatio:
    def test_symmetric_midpoint(self):
        pair = normal_pair(-1, 1)
        assert likelihood_ratio(pair, 0.0) == pytest.approx(1.0, rel=1e-12)

    def test_matches_exponential_form(self):
        pair = normal_pair(-1, 1)
        assert likelihood_ratio(pair, 1.0) == pytest.approx(math.exp(2), rel=1e-12)
        assert likelihood_ratio(pair, -1.0) == pytest.approx(math.exp(-2), rel=1e-12)

    def test_rejects_nonfinite_state(self):
        pair = normal_pair(-1, 1)
        with pytest.raises(DivisionOutsideSupport):
            likelihood_ratio(pair, math.inf)
        with pytest.raises(DivisionOutsideSupport):
            history_log_likelihood_ratio(pair, [0.0, math.nan])

    def test_history_ratio_is_product_of_pointwise_ratios(self):
        rng = np.random.default_rng(11)
        pair = DistributionPair(
            StateDistribution(Family.LAPLACE, -0.5, 1.1),
            StateDistribution(Family.LAPLACE, 0.8, 0.9),
        )
        thetas = rng.normal(0, 2, size=9)
        product = math.prod(likelihood_ratio(pair, t) for t in thetas)
        assert history_likelihood_ratio(pair, thetas) == pytest.approx(
            product, rel=1e-10)
        assert history_log_likelihood_ratio(pair, []) == 0.0

    def test_long_history_stays_finite_in_log_space(self):
        pair = normal_pair(-1, 1)
        log_ratio = history_log_likelihood_ratio(pair, [1.0] * 500)
        assert log_ratio == pytest.approx(1000.0, rel=1e-12)


class TestAlphaBeta:
    def test_identical_densities_give_one(self):
        alpha, beta = alpha_beta(normal_pair(0.3, 0.3, 1.2, 1.2))
        assert alpha == pytest.approx(1.0, rel=1e-12)
        assert beta == pytest.approx(1.0, rel=1e-12)

    def test_equal_variance_normal_closed_form(self):
        alpha, beta = alpha_beta(normal_pair(-1, 1, 1, 1))
        assert alpha == pytest.approx(math.exp(4.0), rel=1e-12)
        assert beta == alpha

    def test_quadrature_path_reproduces_the_equal_variance_closed_form(self):
        # the public entry point short-circuits equal-variance normal pairs,
        # so drive the integrator directly on randomized such pairs
        from cheaptalk_lab.distributions import _ratio_integral

        rng = np.random.default_rng(19)
        for _ in range(8):
            mu_l = rng.uniform(-2, 0)
            mu_h = mu_l + rng.uniform(0.1, 3.0)
            sigma = rng.uniform(0.5, 2.0)
            low = StateDistribution(Family.NORMAL, mu_l, sigma)
            high = StateDistribution(Family.NORMAL, mu_h, sigma)
            want = math.exp((mu_h - mu_l) ** 2 / sigma**2)
            assert _ratio_integral(low, high) == pytest.approx(want, rel=1e-8)
            assert _ratio_integral(high, low) == pytest.approx(want, rel=1e-8)

    def test_quadrature_matches_closed_form_on_random_normal_pairs(self):
        # force the quadrature path by perturbing one variance off equality
        rng = np.random.default_rng(23)
        for _ in range(8):
            mu_l = rng.uniform(-2, 0)
            mu_h = mu_l + rng.uniform(0, 3)
            var_l = rng.uniform(0.5, 1.5)
            var_h = var_l * rng.uniform(0.75, 1.6)
            pair = normal_pair(mu_l, mu_h, var_l, var_h)
            alpha, beta = alpha_beta(pair)
            assert alpha == pytest.approx(
                normal_ratio_integral(mu_l, var_l, mu_h, var_h), rel=1e-8)
            assert beta == pytest.approx(
                normal_ratio_integral(mu_h, var_h, mu_l, var_l), rel=1e-8)

    def test_unequal_variance_normal_golden_values(self):
        pair = normal_pair(-1, 1, 1.0, 1.5)
        alpha, beta = alpha_beta(pair)
        assert alpha == pytest.approx(7.837277511182514, rel=1e-8)
        assert beta == pytest.approx(3442.1137925230114, rel=1e-8)

    def test_laplace_and_logistic_golden_values(self):
        pair = DistributionPair(StateDistribution(Family.LAPLACE, -1, 1.0),
                                StateDistribution(Family.LAPLACE, 1, 1.5))
        alpha, beta = alpha_beta(pair)
        assert alpha == pytest.approx(3.2060585595763884, rel=1e-8)
        assert beta == pytest.approx(5.669461857026858, rel=1e-8)

        pair = DistributionPair(StateDistribution(Family.LOGISTIC, -1, 1.0),
                                StateDistribution(Family.LOGISTIC, 1, 1.5))
        alpha, beta = alpha_beta(pair)
        assert alpha == pytest.approx(1.8627897661148847, rel=1e-8)
        assert beta == pytest.approx(5.146924865753686, rel=1e-8)

    def test_both_exceed_one_for_distinct_densities(self):
        rng = np.random.default_rng(5)
        for family in Family:
            for _ in range(4):
                low = StateDistribution(family, rng.uniform(-1, 0),
                                        rng.uniform(0.6, 1.2))
                high = StateDistribution(family, rng.uniform(0.2, 1.5),
                                         low.scale * rng.uniform(0.85, 1.3))
                alpha, beta = alpha_beta(DistributionPair(low, high))
                assert alpha > 1.0
                assert beta > 1.0

    def test_divergence_conditions_for_normals(self):
        with pytest.raises(DivergentIntegral):
            alpha_beta(normal_pair(-1, 1, 2.0, 1.0))   # var_low = 2 var_high
        with pytest.raises(DivergentIntegral):
            alpha_beta(normal_pair(-1, 1, 1.0, 2.5))   # var_high > 2 var_low

    def test_divergence_for_exponential_tails(self):
        pair = DistributionPair(StateDistribution(Family.LAPLACE, -1, 1.0),
                                StateDistribution(Family.LAPLACE, 1, 0.5))
        with pytest.raises(DivergentIntegral):
            alpha_beta(pair)
        pair = DistributionPair(StateDistribution(Family.LOGISTIC, -1, 1.0),
                                StateDistribution(Family.LOGISTIC, 1, 2.5))
        # beta diverges: 2/s_high - 1/s_low < 0 needs s_high > 2 s_low
        alpha, beta = alpha_beta(DistributionPair(
            StateDistribution(Family.LOGISTIC, -1, 1.0),
            StateDistribution(Family.LOGISTIC, 1, 1.9)))
        assert math.isfinite(alpha) and math.isfinite(beta)
        with pytest.raises(DivergentIntegral):
            alpha_beta(DistributionPair(
                StateDistribution(Family.LOGISTIC, -1, 0.4),
                StateDistribution(Family.LOGISTIC, 1, 1.0)))


class TestSampling:
    def test_normal_sample_mean_within_clt_bound(self):
        rng = np.random.default_rng(101)
        draws = sample(StateDistribution(Family.NORMAL, 0, 1), rng, 10**6)
        assert abs(draws.mean()) < 4.0 / math.sqrt(10**6)

    def test_laplace_sample_variance_near_two(self):
        rng = np.random.default_rng(102)
        draws = sample(StateDistribution(Family.LAPLACE, 0, 1), rng, 10**6)
        assert draws.var() == pytest.approx(2.0, rel=0.05)

    def test_same_seed_gives_identical_sequences(self):
        for family in Family:
            dist = StateDistribution(family, 0.4, 1.7)
            a = dist.sample(np.random.default_rng(9), 1000)
            b = dist.sample(np.random.default_rng(9), 1000)
            np.testing.assert_array_equal(a, b)

    def test_sample_moments_match_declared_moments(self):
        rng = np.random.default_rng(103)
        for family in Family:
            dist = StateDistribution(family, -0.7, 1.4)
            draws = dist.sample(rng, 10**6)
            assert draws.mean() == pytest.approx(dist.mean, abs=0.02)
            assert draws.var() == pytest.approx(dist.variance, rel=0.03)
