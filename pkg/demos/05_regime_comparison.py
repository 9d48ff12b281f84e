"""Four information regimes, one ladder.

How much is the no-overselling constraint worth?  Bracket it:

  no verifiability   any rule collapses to a fixed menu; profit stays at 1/2
  sequential         verified one at a time, no recall
  committed table    the single-cutoff optimum of this library
  transfers          sell the firm at fee E[max(p_i + a_i)]; agent nets zero

Evidence alone (no money changing hands) recovers a good share of the gap
between coin-flipping and full surplus extraction.
"""

from tablemech import (
    CutoffVector,
    TableMechanismGrid,
    audit_ic,
    dynamic_profit,
    no_verifiability_eu,
    optimal_single_cutoff,
    transfers_eu,
)

print(f"{'n':>4} {'no_verif':>9} {'sequential':>11} {'table':>9} {'transfers':>10}")
for n in (2, 3, 5, 10, 20):
    bench = transfers_eu(n, n_samples=300_000, seed=100 + n)
    print(
        f"{n:>4} {no_verifiability_eu(n):>9.4f} {dynamic_profit(n):>11.6f} "
        f"{optimal_single_cutoff(n).expected_utility:>9.6f} "
        f"{bench.principal.mean:>10.6f}"
    )

bench = transfers_eu(5, n_samples=300_000, seed=5)
print(
    f"\ntransfers, n=5: fee by quadrature = {bench.fee:.6f}, agent net = "
    f"{bench.agent_net.mean:+.6f} +- {bench.agent_net.std_error:.6f}  (zero in expectation)"
)

# why the evidence matters: free the message space and the cutoff rule breaks
tab = TableMechanismGrid.from_cutoffs(CutoffVector([0.5]), 5)
rep = audit_ic(tab, messages="unrestricted")
truth, lie, gain = rep.witness
print("\nsame cutoff table audited with unrestricted claims:")
print(f"  IC verdict = {rep.verdict}")
print(f"  at profits {truth.profits}, claiming {lie.reported_profits} "
      f"(an oversell) gains the agent {gain}")
