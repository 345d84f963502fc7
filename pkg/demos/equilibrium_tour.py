#!/usr/bin/env python3
"""Tour of the one-shot rating game: posteriors, rules, and equilibria.

Walks one configuration from the raw message model to the full equilibrium
set, then shows how the set changes when positive reviewers become rare.
"""

from cheaptalk_lab import (GameConfig, PROFILE_LABELS, SC1, best_response_rule,
                           bias_thresholds, enumerate_pbe, normal_pair,
                           posterior_high)

pair = normal_pair(-1.0, 1.0)
game = GameConfig(n_users=2, p_high=0.3, q_plus=0.5, pair=pair)

print("== a single profile under the microscope ==")
print("profile SC1: negative reviewers always message low, positive ones are honest")
for k in range(game.n_users + 1):
    post = posterior_high(SC1, game, k)
    print(f"  {k} high messages -> posterior high {post:.6f}")
rule = best_response_rule(SC1, game)
print(f"  platform ratings by count: {[round(a, 6) for a in rule.actions]}")

print()
print("== equilibrium sets with evenly split biases ==")
for n in (1, 2, 3):
    g = GameConfig(n, 0.3, 0.5, pair)
    labels = [PROFILE_LABELS[p] for p in enumerate_pbe(g)]
    print(f"  {n} reviewer(s): {labels}")
print("the same four profiles are stable for every reviewer count;")
print("in SC1 and SC2 one bias is pushed all the way to honesty.")

print()
print("== rare positive bias changes who can be persuaded ==")
thresholds = bias_thresholds(0.1)
print(f"  honesty threshold on the quality prior: {thresholds.p1_high:.6f}")
for p_high in (0.2, 0.34, 0.36, 0.6):
    g = GameConfig(1, p_high, 0.1, pair)
    labels = [PROFILE_LABELS[p] for p in enumerate_pbe(g)]
    print(f"  quality prior {p_high:.2f}: {labels}")
print("below the threshold the rare positive reviewer only blind-messages;")
print("above it he turns honest and two more equilibria appear.")
