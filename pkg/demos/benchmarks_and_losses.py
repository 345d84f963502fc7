#!/usr/bin/env python3
"""Baselines vs game-theoretic learning: who loses how much, and when.

Prints the system loss of majority voting, blind abandoning, and the
worst-equilibrium Bayesian approach as the reviewer count grows.
"""

from cheaptalk_lab import (GameConfig, abandon_scheme, bayesian_system_loss,
                           majority_vote_loss, normal_pair,
                           symmetric_bias_loss, three_type_loss)

pair = normal_pair(-1.0, 1.0, 1.0, 1.5)

print("== losses against the reviewer count (quality prior 0.3) ==")
print(f"{'N':>3} {'majority':>10} {'abandon':>10} {'bayesian':>10}")
for n in range(1, 9):
    g = GameConfig(n, 0.3, 0.5, pair)
    print(f"{n:>3} {majority_vote_loss(g):>10.6f} "
          f"{abandon_scheme(g)[1]:>10.6f} {bayesian_system_loss(g):>10.6f}")
print("majority voting fluctuates and abandoning is flat; learning decays to zero.")

print()
print("== majority voting is not even monotone in the crowd size ==")
for n in (1, 2, 3):
    g = GameConfig(n, 0.5, 0.5, normal_pair(-1.0, 1.0))
    print(f"  N={n}: loss {majority_vote_loss(g):.6f}")

print()
print("== closed form vs generic enumeration ==")
for n in (1, 2, 4):
    g = GameConfig(n, 0.3, 0.5, pair)
    print(f"  N={n}: enumerated {bayesian_system_loss(g):.9f}  "
          f"formula {symmetric_bias_loss(n, 0.3, g.mean_gap):.9f}")

print()
print("== a third, middle quality level keeps the same story ==")
for n in (2, 3, 4, 6):
    print(f"  N={n}: three-type loss {three_type_loss(n, 2.0):.6f}")
