"""Seeded simulation of the one-shot game and the multi-period mechanism.

Plain Monte Carlo, no variance reduction, so every estimate is an unbiased
oracle for the matching closed form.  Draws are partitioned into fixed-size
chunks with independent substreams and reduced in chunk order; reports are
therefore bit-identical for a given seed regardless of the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._rng import chunked_generators
from .distributions import log_likelihood_ratio
from .evolving import IcResidual, IcResiduals
from .game import (Bias, GameConfig, InferenceRule, ServiceType,
                   StrategyProfile, min_expected_cost)


@dataclass(frozen=True)
class SimulationReport:
    samples: int
    seed: int
    mean_cost: float
    stderr_cost: float
    mean_utility_negative: float
    stderr_utility_negative: float
    count_negative: int
    mean_utility_positive: float
    stderr_utility_positive: float
    count_positive: int


@dataclass(frozen=True)
class EvolvingReport:
    episodes: int
    seed: int
    horizon: int
    mean_period_cost: float
    stderr_period_cost: float
    loss_estimate: float
    ic: IcResiduals


def _mean_stderr(total: float, total_sq: float, n: int) -> tuple[float, float]:
    if n == 0:
        return math.nan, math.nan
    mean = total / n
    if n == 1:
        return mean, math.nan
    var = max(0.0, (total_sq - total**2 / n) / (n - 1))
    return mean, math.sqrt(var / n)


def _run_chunks(chunks, worker, workers: int):
    if workers <= 1:
        return [worker(count, rng) for count, rng in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(worker, count, rng) for count, rng in chunks]
        return [f.result() for f in futures]


def simulate_game(config: GameConfig, profile: StrategyProfile,
                  rule: InferenceRule, samples: int, seed: int,
                  workers: int = 1) -> SimulationReport:
    """Play the one-shot game ``samples`` times and report empirical moments.

    Each sample draws the quality type, every reviewer's bias, the messages
    the profile prescribes, the platform's rating from ``rule``, and a state
    realization; it accumulates the squared rating error and the first
    reviewer's signed rating (bucketed by his bias).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = config.n_users
    actions = np.asarray(rule.actions)
    sends_high = {
        service: np.array([
            profile.negative.sends_high(service),
            profile.positive.sends_high(service),
        ])
        for service in ServiceType
    }

    def worker(count, rng):
        is_high = rng.random(count) < config.p_high
        is_pos = rng.random((count, n)) < config.q_plus
        theta_low = config.pair.low.sample(rng, count)
        theta_high = config.pair.high.sample(rng, count)

        table_h = sends_high[ServiceType.HIGH][is_pos.astype(int)]
        table_l = sends_high[ServiceType.LOW][is_pos.astype(int)]
        high_msgs = np.where(is_high[:, None], table_h, table_l)
        k = high_msgs.sum(axis=1)
        a = actions[k]
        theta = np.where(is_high, theta_high, theta_low)
        cost = (a - theta) ** 2

        focal_pos = is_pos[:, 0]
        u_pos = a[focal_pos]
        u_neg = -a[~focal_pos]
        return (count, float(cost.sum()), float((cost**2).sum()),
                int(focal_pos.sum()), float(u_pos.sum()), float((u_pos**2).sum()),
                int((~focal_pos).sum()), float(u_neg.sum()), float((u_neg**2).sum()))

    parts = _run_chunks(chunked_generators(seed, samples), worker, workers)
    tot = [0.0] * 9
    for part in parts:
        for i, v in enumerate(part):
            tot[i] += v
    mean_cost, se_cost = _mean_stderr(tot[1], tot[2], int(tot[0]))
    mean_pos, se_pos = _mean_stderr(tot[4], tot[5], int(tot[3]))
    mean_neg, se_neg = _mean_stderr(tot[7], tot[8], int(tot[6]))
    return SimulationReport(
        samples=samples, seed=seed,
        mean_cost=mean_cost, stderr_cost=se_cost,
        mean_utility_negative=mean_neg, stderr_utility_negative=se_neg,
        count_negative=int(tot[6]),
        mean_utility_positive=mean_pos, stderr_utility_positive=se_pos,
        count_positive=int(tot[3]),
    )


def simulate_evolving(config: GameConfig, schedule, episodes: int, seed: int,
                      workers: int = 1) -> EvolvingReport:
    """Simulate the commitment mechanism with a truthful reviewer.

    Each episode draws the quality type once, then one state per period; the
    platform posts the committed action for the truthful message and incurs
    the squared error.  Episode histories double as samples for the four
    truthfulness residuals (histories conditional on the type are exactly
    the matching density's product measure).
    """
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    horizon = schedule.horizon
    pair = schedule.pair

    def worker(count, rng):
        is_high = rng.random(count) < config.p_high
        theta_low = pair.low.sample(rng, (count, horizon))
        theta_high = pair.high.sample(rng, (count, horizon))
        theta = np.where(is_high[:, None], theta_high, theta_low)

        if horizon > 1:
            steps = log_likelihood_ratio(pair, theta[:, : horizon - 1])
        else:
            steps = np.zeros((count, 0))
        prefix = np.concatenate(
            [np.zeros((count, 1)), np.cumsum(steps, axis=1)], axis=1)
        a_low, a_high = schedule.actions_from_log_ratio(prefix)
        a = np.where(is_high[:, None], a_high, a_low)
        period_cost = np.mean((a - theta) ** 2, axis=1)

        diff_sum = np.sum(a_low - a_high, axis=1)
        d_high = diff_sum[is_high]
        d_low = diff_sum[~is_high]
        return (count, float(period_cost.sum()), float((period_cost**2).sum()),
                int(d_low.size), float(d_low.sum()), float((d_low**2).sum()),
                int(d_high.size), float(d_high.sum()), float((d_high**2).sum()))

    parts = _run_chunks(chunked_generators(seed, episodes), worker, workers)
    tot = [0.0] * 9
    for part in parts:
        for i, v in enumerate(part):
            tot[i] += v
    mean_cost, se_cost = _mean_stderr(tot[1], tot[2], int(tot[0]))
    mean_low, se_low = _mean_stderr(tot[4], tot[5], int(tot[3]))
    mean_high, se_high = _mean_stderr(tot[7], tot[8], int(tot[6]))
    ic = IcResiduals(
        positive_low=IcResidual(mean_low, se_low),
        positive_high=IcResidual(-mean_high, se_high),
        negative_low=IcResidual(-mean_low, se_low),
        negative_high=IcResidual(mean_high, se_high),
        episodes=episodes,
        seed=seed,
    )
    return EvolvingReport(
        episodes=episodes, seed=seed, horizon=horizon,
        mean_period_cost=mean_cost, stderr_period_cost=se_cost,
        loss_estimate=mean_cost - min_expected_cost(config),
        ic=ic,
    )
