"""Incentive-compatibility audit and table-structure extraction.

The audit asks: can the agent ever strictly gain by deviating?  Under
no-overselling the deviations at truth (p, a) are all (pi, alpha) with
pi <= p componentwise; under the unrestricted correspondence every report is
feasible (used by the comparison regimes).

The key reduction: what matters about a deviation is only which project it
triggers.  The set of projects reachable from truth p is

    achievable(p) = { i : exists pi <= p, alpha with d(pi, alpha) = i }

which is computed for all p at once by a prefix-OR sweep along each profit
axis.  Truth-telling is weakly optimal at (p, a) iff a_{d(p,a)} equals the
best a_i over achievable(p); a strict shortfall is an IC violation.  The same
achievable sets are the extracted indicators of the structure theorem: a
mechanism is IC exactly when it is the argmax rule of some monotone table,
and the audit and the extraction are two readings of one computation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import AuditReport, TableMechanismGrid, ValueProfile, Report
from .evaluation import GridMechanism, lattice_points

__all__ = [
    "AuditBudgetError",
    "ExtractionResult",
    "audit_ic",
    "extract_table_structure",
]

NO_OVERSELLING = "no_overselling"
UNRESTRICTED = "unrestricted"

# cap on the scratch block, in float64 cells
_BLOCK_CELLS = 1 << 22


class AuditBudgetError(RuntimeError):
    """The audit would exceed the configured (truth, report) pair budget."""


@dataclass(frozen=True)
class ExtractionResult:
    """Structure extraction outcome.

    ``table`` always holds the extracted monotone indicators (they are
    well-formed for any input mechanism); ``ok`` says whether the input's
    decisions are the argmax rule of that table at every profile, i.e.
    whether the mechanism *is* a table mechanism.  When not, ``witness`` is
    the lexicographically first profile where the argmax rule is violated.
    """

    ok: bool
    table: TableMechanismGrid
    witness: ValueProfile | None


def _as_grid_mechanism(mech) -> GridMechanism:
    if isinstance(mech, GridMechanism):
        return mech
    if isinstance(mech, TableMechanismGrid):
        return GridMechanism.from_table(mech)
    raise TypeError(f"cannot audit {type(mech).__name__}")


def _achievable(mech: GridMechanism, messages: str) -> np.ndarray:
    """Boolean (k^n, n): projects reachable by some feasible deviation, per truth."""
    n, k = mech.n_projects, mech.grid_resolution
    dec = mech.decisions
    size = k**n
    reach = np.zeros((size, n), dtype=bool)
    for i in range(n):
        reach[:, i] = (dec == i).any(axis=1)
    if messages == UNRESTRICTED:
        return np.broadcast_to(reach.any(axis=0), (size, n)).copy()
    if messages != NO_OVERSELLING:
        raise ValueError(f"unknown message correspondence {messages!r}")
    cube = reach.reshape((k,) * n + (n,))
    for axis in range(n):
        cube = np.logical_or.accumulate(cube, axis=axis)
    return cube.reshape(size, n)


def _pair_count(mech: GridMechanism, messages: str) -> int:
    """Total (truth, feasible report) pairs covered by an exhaustive audit."""
    n, k = mech.n_projects, mech.grid_resolution
    payoffs = k**n
    if messages == UNRESTRICTED:
        profit_reports = (k**n) ** 2  # any pi at any p
    else:
        profit_reports = (k * (k + 1) // 2) ** n  # sum over p of prod(idx+1)
    return payoffs * payoffs * profit_reports


def _first_violation(dec, achievable, vals, row_range=None):
    """Lex-first (p_flat, a_flat, gain) with a strict achievable improvement."""
    size, n = achievable.shape
    rows = range(size) if row_range is None else row_range
    block = max(1, _BLOCK_CELLS // (vals.shape[0] * n))
    rows = list(rows)
    for start in range(0, len(rows), block):
        chunk = rows[start : start + block]
        ach = achievable[chunk][:, None, :]  # (B, 1, n)
        best = np.where(ach, vals[None, :, :], -np.inf).max(axis=2)  # (B, A)
        # truthful[b, a] = vals[a, dec[p_b, a]]: agent's payoff when honest
        truthful = vals[np.arange(vals.shape[0])[None, :], dec[chunk]]
        viol = best > truthful
        if viol.any():
            b, a = np.argwhere(viol)[0]
            return int(chunk[b]), int(a), float(best[b, a] - truthful[b, a])
    return None


def _witness_report(mech: GridMechanism, messages: str, p_flat: int, a_flat: int):
    """Lex-first feasible (pi, alpha) strictly improving on truth at (p, a)."""
    n, k = mech.n_projects, mech.grid_resolution
    grid = np.linspace(0.0, 1.0, k)
    vals = lattice_points(n, k)
    a_true = vals[a_flat]
    truthful_value = a_true[mech.decisions[p_flat, a_flat]]
    if messages == UNRESTRICTED:
        feasible = itertools.product(range(k), repeat=n)
    else:
        p_multi = np.unravel_index(p_flat, (k,) * n)
        feasible = itertools.product(*(range(i + 1) for i in p_multi))
    for pi_multi in feasible:
        pi_flat = int(np.ravel_multi_index(pi_multi, (k,) * n))
        gains = a_true[mech.decisions[pi_flat]] > truthful_value
        if gains.any():
            al_flat = int(np.argmax(gains))
            al_multi = np.unravel_index(al_flat, (k,) * n)
            return Report(tuple(grid[list(pi_multi)]), tuple(grid[list(al_multi)]))
    raise AssertionError("violation flagged but no improving report found")


def audit_ic(
    mech,
    *,
    messages: str = NO_OVERSELLING,
    budget_pairs: int | None = None,
    sample_truths: int | None = None,
    seed: int = 0,
) -> AuditReport:
    """Audit a mechanism for incentive compatibility.

    Exhaustive over the whole joint lattice by default.  With
    ``sample_truths`` set, only that many uniformly drawn truths are checked
    (each against its full deviation set) and the report is marked
    non-exhaustive.  ``budget_pairs`` bounds the number of (truth, report)
    pairs the audit may cover; exceeding it raises AuditBudgetError.
    """
    gm = _as_grid_mechanism(mech)
    n, k = gm.n_projects, gm.grid_resolution
    size = k**n
    vals = lattice_points(n, k)
    grid = np.linspace(0.0, 1.0, k)

    if sample_truths is None:
        checked = _pair_count(gm, messages)
        if budget_pairs is not None and checked > budget_pairs:
            raise AuditBudgetError(
                f"exhaustive audit covers {checked} pairs, budget is {budget_pairs}"
            )
        achievable = _achievable(gm, messages)
        hit = _first_violation(gm.decisions, achievable, vals)
        if hit is None:
            return AuditReport(True, None, checked, True)
        p_flat, a_flat, gain = hit
        p_multi = np.unravel_index(p_flat, (k,) * n)
        a_multi = np.unravel_index(a_flat, (k,) * n)
        truth = ValueProfile(tuple(grid[list(p_multi)]), tuple(grid[list(a_multi)]))
        report = _witness_report(gm, messages, p_flat, a_flat)
        return AuditReport(False, (truth, report, gain), checked, True)

    if sample_truths < 1:
        raise ValueError("sample_truths must be positive")
    rng = np.random.default_rng(seed)
    p_flats = rng.integers(0, size, size=sample_truths)
    a_flats = rng.integers(0, size, size=sample_truths)
    per_p = _per_truth_pairs(gm, messages, p_flats)
    checked = int(per_p.sum())
    if budget_pairs is not None and checked > budget_pairs:
        raise AuditBudgetError(
            f"sampled audit covers {checked} pairs, budget is {budget_pairs}"
        )
    achievable = _achievable(gm, messages)
    for p_flat, a_flat in zip(p_flats, a_flats):
        a_true = vals[a_flat]
        truthful_value = a_true[gm.decisions[p_flat, a_flat]]
        best = a_true[achievable[p_flat]].max()
        if best > truthful_value:
            p_multi = np.unravel_index(int(p_flat), (k,) * n)
            a_multi = np.unravel_index(int(a_flat), (k,) * n)
            truth = ValueProfile(
                tuple(grid[list(p_multi)]), tuple(grid[list(a_multi)])
            )
            report = _witness_report(gm, messages, int(p_flat), int(a_flat))
            return AuditReport(
                False, (truth, report, float(best - truthful_value)), checked, False
            )
    return AuditReport(True, None, checked, False)


def _per_truth_pairs(mech: GridMechanism, messages: str, p_flats) -> np.ndarray:
    n, k = mech.n_projects, mech.grid_resolution
    if messages == UNRESTRICTED:
        return np.full(len(p_flats), (k**n) ** 2, dtype=np.int64)
    multis = np.stack(np.unravel_index(p_flats, (k,) * n), axis=1)
    return (multis + 1).prod(axis=1) * (k**n)


def extract_table_structure(mech) -> ExtractionResult:
    """Recover the monotone table behind a mechanism, if there is one.

    The extracted indicator marks project i on the table at p iff some
    feasible deviation from p reaches i.  Extraction succeeds when the
    mechanism's own decisions are the argmax rule of that table everywhere
    (ties resolved any way), which happens exactly when the mechanism is IC.
    """
    gm = _as_grid_mechanism(mech)
    n, k = gm.n_projects, gm.grid_resolution
    achievable = _achievable(gm, NO_OVERSELLING)
    table = TableMechanismGrid(achievable.reshape((k,) * n + (n,)))
    vals = lattice_points(n, k)
    hit = _first_violation(gm.decisions, achievable, vals)
    if hit is None:
        return ExtractionResult(True, table, None)
    p_flat, a_flat, _ = hit
    grid = np.linspace(0.0, 1.0, k)
    p_multi = np.unravel_index(p_flat, (k,) * n)
    a_multi = np.unravel_index(a_flat, (k,) * n)
    witness = ValueProfile(tuple(grid[list(p_multi)]), tuple(grid[list(a_multi)]))
    return ExtractionResult(False, table, witness)
