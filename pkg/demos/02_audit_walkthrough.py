"""Auditing a decision rule for honesty.

Feed any grid decision rule to the auditor and it either certifies that
truth-telling is optimal at every profile, or returns a witness: a true
profile plus a feasible lie that strictly pays.  Witnesses replay, so you
never have to take the verdict on faith.

The companion extractor answers the structural question: which rules survive?
Exactly those that put projects "on the table" by monotone profit indicators
and then defer to the agent's taste.
"""

from pathlib import Path

from tablemech import (
    audit_ic,
    cutoff_to_grid,
    extract_table_structure,
    load_mechanism,
)

here = Path(__file__).resolve().parent / "mechanisms"

# a bar at 1/2 for project 0, default always available
cutoff = load_mechanism(here / "cutoff_n2.json")
table = cutoff_to_grid(cutoff, 5)
report = audit_ic(table)
print(f"cutoff table, k=5: IC verdict = {report.verdict} "
      f"({report.checked} truth/report pairs, exhaustive={report.exhaustive})")

# the same shape, mirrored: project 0 is available only when its reported
# profit is LOW.  Underselling now pays.
reverse = load_mechanism(here / "reverse_cutoff_n2.json")
report = audit_ic(reverse)
print(f"\nreverse-cutoff rule: IC verdict = {report.verdict}")
truth, lie, gain = report.witness
print(f"  witness truth:  profits={truth.profits} payoffs={truth.payoffs}")
print(f"  witness report: profits={lie.reported_profits} payoffs={lie.reported_payoffs}")
print(f"  gain to the agent: {gain}")
print(f"  feasible (no-overselling)? {lie.feasible_given(truth)}")

d_true = reverse.decide(truth.profits, truth.payoffs)
d_lie = reverse.decide(lie.reported_profits, lie.reported_payoffs)
print(f"  replay: truthful pick {d_true} pays {truth.payoffs[d_true]}, "
      f"lying pick {d_lie} pays {truth.payoffs[d_lie]}")

# structure extraction: reachable projects per profile, read as a table
print("\nextraction:")
res = extract_table_structure(table)
print(f"  cutoff table      -> is a table mechanism: {res.ok}")
res = extract_table_structure(reverse)
print(f"  reverse rule      -> is a table mechanism: {res.ok}")
print(f"  first disagreeing profile: profits={res.witness.profits} "
      f"payoffs={res.witness.payoffs}")
