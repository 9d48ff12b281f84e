"""Is the threshold really the best table?  Check them all.

For two projects on a k-point profit grid, a table mechanism is pinned down
by one monotone 0/1 indicator: C(2k, k) candidates, few enough to enumerate
outright.  Scoring is exact integer arithmetic, so ties are real ties.

Every grid size crowns a threshold.  On odd grids two mirrored thresholds
tie and the one at 1/2 is reported; the bar never strays from the middle.
"""

import math

from tablemech import best_table_mechanism_n2

print(f"{'k':>3} {'candidates':>11} {'best EU':>10} {'cutoff':>8} "
      f"{'ties':>5}  shape")
for k in range(2, 10):
    res = best_table_mechanism_n2(k)
    shape = "threshold" if res.is_cutoff_shaped else "other"
    cut = f"{res.best_cutoff:.4f}" if res.best_cutoff is not None else "-"
    print(
        f"{k:>3} {res.n_candidates:>11} {str(res.eu_exact):>10} {cut:>8} "
        f"{len(res.maximizers):>5}  {shape}"
    )
    assert res.n_candidates == math.comb(2 * k, k)

res = best_table_mechanism_n2(9)
print("\nwinning indicator at k=9 (rows: own profit, low to high):")
for row in res.best.astype(int)[::-1]:
    print("   ", "".join(".#"[v] for v in row))
print("a flat staircase: on the table exactly when own profit clears 1/2,")
print("regardless of what the other project reports.")
