"""Closed forms for single- and multi-cutoff mechanisms under uniform values.

The principal's expected profit from a common cutoff c across n-1 projects is

    eu(c) = 1/2 + (c/2) * (1 - (1 - c^n) / (n (1 - c)))

and the optimal c solves phi_n(c) = 0 where

    phi_n(c) = n (1-c) (1 - c + c^n) - (1 - c^n).

phi_n has a spurious root at c = 1; the finder brackets the interior root
away from it and bisection does the rest.  Heterogeneous cutoffs are handled
through decision probabilities built from elementary symmetric polynomials,
evaluated by a normalized recurrence that stays inside [0,1] (no binomial
blowup, stable past n = 200).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CutoffVector

__all__ = [
    "OptimalCutoffResult",
    "BracketError",
    "NonUniqueRootError",
    "phi",
    "single_cutoff_eu",
    "prob_decision",
    "multi_cutoff_eu",
    "optimal_single_cutoff",
    "grid_scan_argmax",
    "symmetry_in_perturbation",
    "heterogeneous_cutoff_scan",
]


class BracketError(RuntimeError):
    """No sign change found for phi_n; refusing to return the spurious root 1."""


class NonUniqueRootError(RuntimeError):
    """More than one sign change of phi_n detected on the bracket."""


@dataclass(frozen=True)
class OptimalCutoffResult:
    """Root of the optimality equation and the value it attains.

    ``residual`` is phi_n at the returned cutoff; the bisection bracket width
    bounds the cutoff error and |residual| ~ |phi_n'| * width.
    """

    n_projects: int
    cutoff: float
    expected_utility: float
    residual: float


def phi(n: int, c: float) -> float:
    """The optimality polynomial n(1-c)(1-c+c^n) - (1-c^n)."""
    if n < 2:
        raise ValueError("phi needs n >= 2")
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"cutoff {c} outside [0, 1]")
    cn = c**n
    return n * (1.0 - c) * (1.0 - c + cn) - (1.0 - cn)


def _geom_mean_factor(n: int, c: np.ndarray) -> np.ndarray:
    """(1 - c^n) / (n (1 - c)), a mean of the geometric sequence 1..c^{n-1}.

    The removable singularity at c=1 (limit 1) is evaluated through
    expm1/log1p once 1-c is below 1e-6, where the direct quotient starts
    cancelling.
    """
    d = 1.0 - c
    small = d < 1e-6
    d_reg = np.where(small, 1.0, d)
    g = (1.0 - c**n) / (n * d_reg)
    if np.any(small):
        pos = small & (d > 0)
        d_pos = np.where(pos, d, 0.5)
        g_small = -np.expm1(n * np.log1p(-d_pos)) / (n * d_pos)
        g = np.where(small, np.where(pos, g_small, 1.0), g)
    return g


def single_cutoff_eu(n: int, c):
    """Expected principal profit of the common-cutoff mechanism.

    Scalar in, scalar out; ndarray in, ndarray out.  n=1 (default only)
    gives 1/2 for every c.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    arr = np.asarray(c, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any((arr < 0.0) | (arr > 1.0)):
        raise ValueError("cutoff outside [0, 1]")
    eu = 0.5 + 0.5 * arr * (1.0 - _geom_mean_factor(n, arr))
    return float(eu[0]) if scalar else eu


def _normalized_esp(cuts: np.ndarray) -> np.ndarray:
    """e_j(cuts)/C(m, j) for j=0..m, via a recurrence that stays in [0, 1]."""
    m = cuts.shape[0]
    e = np.zeros(m + 1)
    e[0] = 1.0
    for t in range(1, m + 1):
        ct = cuts[t - 1]
        for j in range(t, 0, -1):
            e[j] = e[j] * (t - j) / t + ct * e[j - 1] * j / t
    return e


def prob_decision(cutoffs: CutoffVector) -> np.ndarray:
    """Probability each project is chosen, under uniform values.

    P(default) is the mean of the normalized elementary symmetric polynomials
    of the cutoffs; P(project i) follows from conditioning on p_i clearing
    its bar: (1 - c_i) times P(default) with c_i zeroed out.
    """
    cs = cutoffs.cutoffs
    n = cutoffs.n_projects
    probs = np.empty(n)
    probs[n - 1] = _normalized_esp(cs).mean()
    for i in range(n - 1):
        dropped = cs.copy()
        dropped[i] = 0.0
        probs[i] = (1.0 - cs[i]) * _normalized_esp(dropped).mean()
    return probs


def multi_cutoff_eu(cutoffs: CutoffVector) -> float:
    """Expected principal profit of an arbitrary cutoff vector.

    Conditional on project i being chosen, p_i is uniform above c_i with
    mean (1 + c_i)/2; weight by the decision probabilities.
    """
    probs = prob_decision(cutoffs)
    full = cutoffs.full_cutoffs
    return float((((1.0 + full) / 2.0) * probs).sum())


def _scan_sign_changes(n: int, hi: float, points: int = 33) -> int:
    cs = np.linspace(0.0, hi, points)
    signs = np.sign([phi(n, float(c)) for c in cs])
    signs = signs[signs != 0]
    return int((signs[1:] != signs[:-1]).sum())


def optimal_single_cutoff(n: int, tol: float = 1e-12) -> OptimalCutoffResult:
    """Interior root of phi_n by bisection on a verified bracket.

    The bracket starts at [0, 1 - 1/(8n)]: phi_n(0) = n-1 > 0, and the right
    end is pushed toward 1 through candidates 1 - 2^{-j}/n until phi goes
    negative.  c = 1 is always a root of phi_n but never the optimum; the
    bracket construction excludes it structurally, and exhausting the scan
    raises BracketError rather than returning it.  A coarse sign-change scan
    guards the uniqueness assumption and raises NonUniqueRootError if more
    than one crossing shows up.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    lo = 0.0
    f_lo = phi(n, lo)
    if f_lo <= 0.0:
        raise BracketError(f"phi_{n}(0) = {f_lo} is not positive")
    hi = 1.0 - 1.0 / (8.0 * n)
    f_hi = phi(n, hi)
    j = 1
    while f_hi >= 0.0:
        if f_hi == 0.0:
            break
        hi = 1.0 - 2.0**-j / n
        if hi >= 1.0:
            raise BracketError(f"no sign change of phi_{n} found left of c=1")
        f_hi = phi(n, hi)
        j += 1
        if j > 60:
            raise BracketError(f"no sign change of phi_{n} found left of c=1")
    if _scan_sign_changes(n, hi) > 1:
        raise NonUniqueRootError(f"multiple phi_{n} sign changes on [0, {hi}]")
    if f_hi == 0.0:
        root = hi
    else:
        for _ in range(200):
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            f_mid = phi(n, mid)
            if f_mid > 0.0:
                lo = mid
            elif f_mid < 0.0:
                hi = mid
            else:
                lo = hi = mid
        root = 0.5 * (lo + hi)
    value = 0.5 + 0.5 * root * (root - root**n)
    return OptimalCutoffResult(n, root, value, phi(n, root))


def grid_scan_argmax(n: int, m: int) -> float:
    """Argmax of single_cutoff_eu over a uniform m-point grid on [0, 1].

    Independent oracle for the root finder; accuracy is the grid pitch, so
    desk-scale checks want m in the tens of thousands.
    """
    if m < 2:
        raise ValueError("need at least 2 grid points")
    cs = np.linspace(0.0, 1.0, m)
    return float(cs[int(np.argmax(single_cutoff_eu(n, cs)))])


def symmetry_in_perturbation(
    n: int, base: float, t: float, i: int, j: int
) -> tuple[float, float]:
    """EU under opposite perturbations of two cutoffs; must be equal.

    Positions i != j are 1-based into the n-1 non-default cutoffs (matching
    the natural c_1..c_{n-1} naming).  Returns (EU with c_i = base+t and
    c_j = base-t, EU with the signs flipped); their equality is the evenness
    in t that the optimality proof's symmetrization argument rests on.
    """
    if not (1 <= i <= n - 1 and 1 <= j <= n - 1 and i != j):
        raise ValueError(f"positions must be distinct in 1..{n - 1}")
    if not (0.0 <= base + t <= 1.0 and 0.0 <= base - t <= 1.0):
        raise ValueError("base +/- t leaves [0, 1]")
    plus = np.full(n - 1, base)
    plus[i - 1] = base + t
    plus[j - 1] = base - t
    minus = np.full(n - 1, base)
    minus[i - 1] = base - t
    minus[j - 1] = base + t
    return (
        multi_cutoff_eu(CutoffVector(plus)),
        multi_cutoff_eu(CutoffVector(minus)),
    )


def heterogeneous_cutoff_scan(n: int, m: int) -> tuple[float, np.ndarray]:
    """Best EU over the full m^(n-1) lattice of heterogeneous cutoff vectors.

    Evidence for single-cutoff optimality beyond n=2: the lattice maximum
    never beats the optimal common cutoff.  Returns (best EU, best vector).
    Cost grows as m^(n-1); meant for small n.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if m < 2:
        raise ValueError("need at least 2 grid points")
    grid = np.linspace(0.0, 1.0, m)
    best = -math.inf
    best_cuts = None
    for flat in range(m ** (n - 1)):
        multi = np.unravel_index(flat, (m,) * (n - 1))
        cuts = grid[list(multi)]
        eu = multi_cutoff_eu(CutoffVector(cuts))
        if eu > best:
            best = eu
            best_cuts = cuts
    return best, best_cuts
