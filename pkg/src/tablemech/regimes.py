"""Comparison regimes: no verifiability at all, and full transfers.

Without any evidence behind profit reports, every incentive-compatible
mechanism collapses to a menu: the principal fixes a set S of projects and
the agent takes its favorite.  Profits and payoffs are independent, so the
principal's expected profit is the unconditional mean 1/2 however S is
chosen.

With transfers and ex-post verifiability, the principal sells the firm: the
agent pays a fixed fee equal to the full expected surplus E[max_i (p_i+a_i)],
then picks the surplus-maximizing project, netting zero in expectation.  An
outcome-equivalent variant pays the transfer out of reported values
(t = pi_d - fee) instead of charging the fee upfront; only the bookkeeping
differs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.integrate import quad

from .audit import UNRESTRICTED, audit_ic
from .evaluation import GridMechanism
from .montecarlo import DEFAULT_SEED, EstimateWithError, estimate_value

__all__ = [
    "CertificationError",
    "TransfersBenchmark",
    "no_verifiability_eu",
    "menu_profit_estimate",
    "menu_grid_mechanism",
    "menu_mechanism_is_ic",
    "expected_max_surplus",
    "transfers_eu",
]


class CertificationError(AssertionError):
    """A menu mechanism's simulated profit strayed from 1/2."""


def _menu_mask(menu: Iterable[int], n: int) -> np.ndarray:
    s = sorted(set(int(i) for i in menu))
    if not s:
        raise ValueError("menu must be nonempty")
    if s[0] < 0 or s[-1] >= n:
        raise ValueError(f"menu {s} not within 0..{n - 1}")
    mask = np.zeros(n, dtype=bool)
    mask[s] = True
    return mask


def menu_profit_estimate(
    menu: Iterable[int], n: int, n_samples: int, seed: int = DEFAULT_SEED
) -> EstimateWithError:
    """Simulated principal profit when the agent picks its favorite in the menu."""
    mask = _menu_mask(menu, n)

    def value(p, a):
        d = np.argmax(np.where(mask, a, -np.inf), axis=1)
        return p[np.arange(p.shape[0]), d]

    return estimate_value(value, n, n_samples, seed)


def no_verifiability_eu(
    n: int,
    *,
    certify: bool = False,
    n_samples: int = 200_000,
    seed: int = DEFAULT_SEED,
) -> float:
    """Principal's profit ceiling without verifiable reports: exactly 1/2.

    With ``certify``, backs the constant up by simulating two extreme menus
    (default only, everything) and checking both land within four standard
    errors of 1/2.
    """
    if n < 1:
        raise ValueError("need at least one project")
    if certify:
        for menu in ({n - 1}, set(range(n))):
            est = menu_profit_estimate(menu, n, n_samples, seed)
            if abs(est.mean - 0.5) > 4.0 * est.std_error:
                raise CertificationError(
                    f"menu {sorted(menu)} profit {est.mean} strays from 1/2 "
                    f"(stderr {est.std_error})"
                )
    return 0.5


def menu_grid_mechanism(menu: Iterable[int], n: int, k: int) -> GridMechanism:
    """The menu rule d(p, a) = favorite in the menu, tabulated on the grid."""
    mask = _menu_mask(menu, n)

    def rule(p, a):
        return int(np.argmax(np.where(mask, a, -np.inf)))

    return GridMechanism.from_callable(n, k, rule)


def menu_mechanism_is_ic(menu: Iterable[int], n: int, k: int) -> bool:
    """Audit a menu rule under the unrestricted message space."""
    return audit_ic(menu_grid_mechanism(menu, n, k), messages=UNRESTRICTED).verdict


def expected_max_surplus(n: int) -> float:
    """E[max_i (p_i + a_i)] by quadrature, each p_i + a_i triangular on [0, 2]."""
    if n < 1:
        raise ValueError("need at least one project")

    def cdf(s: float) -> float:
        if s <= 1.0:
            return 0.5 * s * s
        return 1.0 - 0.5 * (2.0 - s) ** 2

    tail = lambda s: 1.0 - cdf(s) ** n
    lo, _ = quad(tail, 0.0, 1.0)
    hi, _ = quad(tail, 1.0, 2.0)
    return lo + hi


@dataclass(frozen=True)
class TransfersBenchmark:
    """Simulated transfers regime: full-surplus extraction, zero agent net.

    ``principal`` estimates E[max_i(p_i + a_i)], what the fee hands the
    principal; ``agent_net`` estimates the agent's realized surplus minus the
    independently computed ``fee`` — the two sides use different machinery,
    so agent_net hovering at 0 is a real check, not an identity.
    """

    principal: EstimateWithError
    agent_net: EstimateWithError
    fee: float


def transfers_eu(n: int, n_samples: int, seed: int = DEFAULT_SEED) -> TransfersBenchmark:
    """Benchmark the selling-the-firm mechanism by simulation plus quadrature."""
    fee = expected_max_surplus(n)

    def surplus(p, a):
        return (p + a).max(axis=1)

    principal = estimate_value(surplus, n, n_samples, seed)
    agent_net = EstimateWithError(
        principal.mean - fee, principal.std_error, principal.n_samples, seed
    )
    return TransfersBenchmark(principal, agent_net, fee)
