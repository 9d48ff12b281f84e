"""Where should the bar sit?

A principal must pick one of n projects on an agent's say-so.  Profit claims
can be understated but never inflated; payoff claims are cheap talk.  The
best committed rule screens every non-default project with one common profit
bar c and lets the agent take its favorite among the survivors.

This script solves for the bar, shows the stationarity residual, and traces
the large-n law: the bar approaches 1 like 1/sqrt(n).
"""

import math

from tablemech import grid_scan_argmax, optimal_single_cutoff, phi

print("optimal single cutoff per problem size")
print(f"{'n':>7} {'cutoff':>18} {'expected utility':>18} {'|phi residual|':>15}")
for n in (2, 3, 5, 10, 25, 100, 1000):
    res = optimal_single_cutoff(n)
    print(
        f"{n:>7} {res.cutoff:>18.12f} {res.expected_utility:>18.12f} "
        f"{abs(res.residual):>15.2e}"
    )

# sanity: a dumb grid scan lands on the same argmax
for n in (2, 5, 50):
    scan = grid_scan_argmax(n, 100_001)
    root = optimal_single_cutoff(n).cutoff
    print(f"n={n}: |bisection - scan| = {abs(root - scan):.2e}")

print()
print("the bar climbs like 1 - 1/sqrt(n):")
print(f"{'n':>9} {'cutoff':>12} {'sqrt(n)*(1-c)':>15}")
for exp in range(2, 7):
    n = 10**exp
    c = optimal_single_cutoff(n).cutoff
    print(f"{n:>9} {c:>12.8f} {math.sqrt(n) * (1 - c):>15.10f}")

print()
print("two projects is the textbook case: bar at 1/2, profit 9/16")
res = optimal_single_cutoff(2)
print(f"  c = {res.cutoff:.12f}, EU = {res.expected_utility:.12f}")
print(f"  phi(2, c) at the endpoints: {phi(2, 0.0):+.3f} at 0, {phi(2, 1.0):+.3f} at 1")
