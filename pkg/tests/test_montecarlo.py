import numpy as np
import pytest

from cheaptalk_lab.distributions import normal_pair
from cheaptalk_lab.evolving import ConstantSchedule, solve_schedule
from cheaptalk_lab.game import (Bias, GameConfig, SC1, SC2, SC5,
                                best_response_rule, expected_platform_cost,
                                expected_user_utility, min_expected_cost)
from cheaptalk_lab.montecarlo import simulate_evolving, simulate_game


def config(n=1, p=0.3, q=0.5, var_h=1.0):
    return GameConfig(n, p, q, normal_pair(-1.0, 1.0, 1.0, var_h))


def z_score(estimate, stderr, reference):
    return abs(estimate - reference) / stderr


class TestSimulateGame:
    def test_matches_closed_forms_within_three_stderr(self):
        g = config(n=2)
        rule = best_response_rule(SC1, g)
        report = simulate_game(g, SC1, rule, 200_000, seed=11)
        assert z_score(report.mean_cost, report.stderr_cost,
                       expected_platform_cost(SC1, rule, g)) < 3.0
        assert z_score(report.mean_utility_positive, report.stderr_utility_positive,
                       expected_user_utility(SC1, rule, Bias.POSITIVE, g)) < 3.0
        assert z_score(report.mean_utility_negative, report.stderr_utility_negative,
                       expected_user_utility(SC1, rule, Bias.NEGATIVE, g)) < 3.0

    def test_constant_rule_reaches_the_abandoning_cost(self):
        g = config(var_h=1.5)
        rule = best_response_rule(SC5, g)
        report = simulate_game(g, SC5, rule, 200_000, seed=13)
        # prior-mean rating: cost = floor + abandoning loss
        reference = min_expected_cost(g) + 0.84
        assert z_score(report.mean_cost, report.stderr_cost, reference) < 3.0

    def test_single_sample_runs(self):
        g = config()
        rule = best_response_rule(SC1, g)
        a = simulate_game(g, SC1, rule, 1, seed=3)
        b = simulate_game(g, SC1, rule, 1, seed=3)
        assert a == b
        assert a.count_negative + a.count_positive == 1

    def test_bit_identical_across_reruns_and_worker_counts(self):
        g = config(n=3, q=0.4)
        rule = best_response_rule(SC2, g)
        base = simulate_game(g, SC2, rule, 120_001, seed=17)
        again = simulate_game(g, SC2, rule, 120_001, seed=17)
        threaded = simulate_game(g, SC2, rule, 120_001, seed=17, workers=4)
        assert base == again
        assert base == threaded

    def test_disjoint_seeds_agree_statistically(self):
        g = config(n=2)
        rule = best_response_rule(SC2, g)
        a = simulate_game(g, SC2, rule, 150_000, seed=100)
        b = simulate_game(g, SC2, rule, 150_000, seed=20_000)
        combined = np.hypot(a.stderr_cost, b.stderr_cost)
        assert abs(a.mean_cost - b.mean_cost) < 4.0 * combined

    def test_unbiasedness_across_many_seeds(self):
        # three-stderr coverage should fail only for a few percent of seeds
        g = config(n=1)
        rule = best_response_rule(SC1, g)
        reference = expected_platform_cost(SC1, rule, g)
        misses = 0
        for seed in range(60):
            report = simulate_game(g, SC1, rule, 20_000, seed=seed)
            if z_score(report.mean_cost, report.stderr_cost, reference) > 3.0:
                misses += 1
        assert misses <= 2

    def test_rejects_empty_sample_request(self):
        g = config()
        rule = best_response_rule(SC1, g)
        with pytest.raises(ValueError):
            simulate_game(g, SC1, rule, 0, seed=1)


class TestSimulateEvolving:
    def test_matches_the_closed_form_loss(self):
        g = config()
        schedule = solve_schedule(g, 2)
        report = simulate_evolving(g, schedule, 150_000, seed=23)
        assert z_score(report.mean_period_cost, report.stderr_period_cost,
                       min_expected_cost(g) + 0.126739) < 3.0
        assert report.loss_estimate == pytest.approx(
            report.mean_period_cost - min_expected_cost(g))

    def test_single_period_constant_schedule_recovers_the_abandoning_loss(self):
        g = config()
        schedule = ConstantSchedule(horizon=1, pair=g.pair,
                                    a_low=g.prior_mean, a_high=g.prior_mean)
        report = simulate_evolving(g, schedule, 150_000, seed=29)
        assert z_score(report.mean_period_cost, report.stderr_period_cost,
                       min_expected_cost(g) + 0.84) < 3.0

    def test_ic_residuals_track_the_schedule(self):
        g = config()
        schedule = solve_schedule(g, 3)
        report = simulate_evolving(g, schedule, 100_000, seed=31)
        for residual in report.ic.as_list():
            assert abs(residual.value) <= 3.0 * residual.stderr

    def test_bit_identical_reports(self):
        g = config()
        schedule = solve_schedule(g, 2)
        a = simulate_evolving(g, schedule, 60_000, seed=37)
        b = simulate_evolving(g, schedule, 60_000, seed=37)
        threaded = simulate_evolving(g, schedule, 60_000, seed=37, workers=3)
        assert a == b
        assert a == threaded
