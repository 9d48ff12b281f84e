"""Grid mechanisms, feasible-report enumeration, exact discrete expected profit.

A GridMechanism is an arbitrary decision rule on the joint grid: any map
from (profit lattice point, payoff lattice point) to a project index.  This
is the container the incentive auditor consumes, and it can hold rules that
are not table mechanisms at all.

The no-overselling message space at a true profile is every report whose
profit claims are componentwise at most the truth, with payoff claims free;
``message_space`` streams it without materializing (it is exponential in n).
"""

from __future__ import annotations

import csv
import itertools
from pathlib import Path
from typing import Callable, Iterator, Union

import numpy as np

from .core import (
    CutoffVector,
    GridError,
    TableMechanismGrid,
    ValueProfile,
    Report,
    _as_index_array,
)

__all__ = [
    "GridMechanism",
    "message_space",
    "message_space_size",
    "exact_discrete_eu",
    "export_decisions_csv",
]


class GridMechanism:
    """Dense decision rule on the joint (profit x payoff) lattice.

    ``decisions`` has shape (k^n, k^n): rows are flattened profit points,
    columns flattened payoff points, both in C order over the n axes; entries
    are project indices in 0..n-1.
    """

    _MAX_CELLS = 20_000_000

    def __init__(self, n_projects: int, grid_resolution: int, decisions: np.ndarray):
        if n_projects < 1:
            raise ValueError("need at least one project")
        if grid_resolution < 2:
            raise ValueError("grid resolution must be at least 2")
        size = grid_resolution**n_projects
        if size * size > self._MAX_CELLS:
            raise ValueError(
                f"dense decision array with {size}^2 cells exceeds the memory guard"
            )
        d = np.ascontiguousarray(decisions)
        if d.shape != (size, size):
            raise ValueError(
                f"decisions shape {d.shape} != ({size}, {size}) for "
                f"n={n_projects}, k={grid_resolution}"
            )
        if not np.issubdtype(d.dtype, np.integer):
            raise ValueError("decisions must be integers")
        if np.any(d < 0) or np.any(d >= n_projects):
            raise ValueError(f"decision values must lie in 0..{n_projects - 1}")
        self.n_projects = n_projects
        self.grid_resolution = grid_resolution
        self._dec = d.astype(np.int64, copy=False)
        self._dec.setflags(write=False)

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_callable(
        cls,
        n: int,
        k: int,
        rule: Callable[[np.ndarray, np.ndarray], int],
    ) -> "GridMechanism":
        """Tabulate rule(profits, payoffs) -> index over the joint lattice."""
        grid = np.linspace(0.0, 1.0, k)
        pts = [grid[list(m)] for m in itertools.product(range(k), repeat=n)]
        size = k**n
        dec = np.empty((size, size), dtype=np.int64)
        for r, p in enumerate(pts):
            for c, a in enumerate(pts):
                dec[r, c] = rule(p, a)
        return cls(n, k, dec)

    @classmethod
    def from_table(cls, table: TableMechanismGrid) -> "GridMechanism":
        """The table's argmax rule, tabulated (lowest index wins payoff ties)."""
        n, k = table.n_projects, table.grid_resolution
        size = k**n
        masks = table.indicators.reshape(size, n)
        vals = lattice_points(n, k)
        # rows: profit points; for each, argmax of payoffs over the mask
        dec = np.empty((size, size), dtype=np.int64)
        for r in range(size):
            dec[r] = np.argmax(np.where(masks[r], vals, -np.inf), axis=1)
        return cls(n, k, dec)

    @classmethod
    def from_cutoffs(cls, cutoffs: CutoffVector, k: int) -> "GridMechanism":
        return cls.from_table(TableMechanismGrid.from_cutoffs(cutoffs, k))

    # -- queries ---------------------------------------------------------------

    @property
    def decisions(self) -> np.ndarray:
        return self._dec

    def decide(self, profits, payoffs) -> int:
        r = flatten_index(profits, self.n_projects, self.grid_resolution, "profits")
        c = flatten_index(payoffs, self.n_projects, self.grid_resolution, "payoffs")
        return int(self._dec[r, c])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridMechanism):
            return NotImplemented
        return (
            self.n_projects == other.n_projects
            and self.grid_resolution == other.grid_resolution
            and bool(np.array_equal(self._dec, other._dec))
        )

    def __repr__(self) -> str:
        return (
            f"GridMechanism(n_projects={self.n_projects}, "
            f"grid_resolution={self.grid_resolution})"
        )


def lattice_points(n: int, k: int) -> np.ndarray:
    """All k^n lattice vectors in C order, shape (k^n, n)."""
    grid = np.linspace(0.0, 1.0, k)
    mesh = np.meshgrid(*([grid] * n), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def flatten_index(values, n: int, k: int, what: str) -> int:
    idx = _as_index_array(values, k, what)
    if idx.shape != (n,):
        raise ValueError(f"expected {n} {what}, got {idx.shape[0]}")
    return int(np.ravel_multi_index(tuple(idx), (k,) * n))


def message_space(profile: ValueProfile, k: int) -> Iterator[Report]:
    """Stream every feasible report at an on-grid true profile.

    Profit claims run over grid points at most the truth per coordinate;
    payoff claims run over the whole grid.  Never materialized: the count is
    prod(idx_i + 1) * k^n.
    """
    idx = _as_index_array(profile.profits, k, "profits")
    grid = np.linspace(0.0, 1.0, k)
    profit_axes = [tuple(grid[: i + 1]) for i in idx]
    payoff_axis = tuple(grid)
    n = profile.n_projects
    for pi in itertools.product(*profit_axes):
        for alpha in itertools.product(payoff_axis, repeat=n):
            yield Report(pi, alpha)


def message_space_size(profile: ValueProfile, k: int) -> int:
    """Exact number of feasible reports, without enumeration."""
    idx = _as_index_array(profile.profits, k, "profits")
    count = 1
    for i in idx:
        count *= int(i) + 1
    return count * k**profile.n_projects


def exact_discrete_eu(mech: Union[GridMechanism, TableMechanismGrid]) -> float:
    """Uniform average of the chosen project's profit over the lattice.

    For a GridMechanism the average runs over the full joint lattice (profit
    and payoff grids enumerated exactly).  For a TableMechanismGrid the agent
    payoffs are integrated out analytically: continuous iid payoffs make each
    on-table project the favorite with equal probability, so each profile
    contributes the mean profit of its on-table set.
    """
    if isinstance(mech, TableMechanismGrid):
        n, k = mech.n_projects, mech.grid_resolution
        grid = np.linspace(0.0, 1.0, k)
        # slice along the first profit axis to keep memory at O(k^{n-1})
        if n == 1:
            rest = np.zeros((1, 0))
        else:
            rest = lattice_points(n - 1, k)
        ind = mech.indicators.reshape(k, k ** (n - 1), n)
        total = 0.0
        for i in range(k):
            vals = np.concatenate(
                [np.full((rest.shape[0], 1), grid[i]), rest], axis=1
            )
            masks = ind[i]
            counts = masks.sum(axis=1)
            total += float(((vals * masks).sum(axis=1) / counts).sum())
        return total / k**n
    if isinstance(mech, GridMechanism):
        vals = lattice_points(mech.n_projects, mech.grid_resolution)
        chosen = np.take_along_axis(
            vals, mech.decisions, axis=1
        )  # (k^n rows) x (k^n payoff cols): profit of the chosen project
        return float(chosen.mean())
    raise TypeError(f"cannot evaluate {type(mech).__name__}")


def export_decisions_csv(
    mech: Union[GridMechanism, TableMechanismGrid], path: str | Path
) -> int:
    """Write one row per (profit, payoff) lattice pair; returns the row count.

    Columns: p0..p{n-1}, a0..a{n-1}, decision.  Debugging aid for small
    instances; refuses to write more than a million rows.
    """
    if isinstance(mech, TableMechanismGrid):
        mech = GridMechanism.from_table(mech)
    n, k = mech.n_projects, mech.grid_resolution
    size = k**n
    if size * size > 1_000_000:
        raise ValueError(f"{size * size} rows is past the CSV export limit")
    vals = lattice_points(n, k)
    header = [f"p{i}" for i in range(n)] + [f"a{i}" for i in range(n)] + ["decision"]
    rows = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in range(size):
            for c in range(size):
                w.writerow(
                    [f"{v:.12g}" for v in vals[r]]
                    + [f"{v:.12g}" for v in vals[c]]
                    + [int(mech.decisions[r, c])]
                )
                rows += 1
    return rows
