import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tablemech import (
    CutoffVector,
    GridError,
    GridMechanism,
    TableMechanismGrid,
    ValueProfile,
    exact_discrete_eu,
    export_decisions_csv,
    message_space,
    message_space_size,
)
from tablemech.evaluation import flatten_index, lattice_points


def test_lattice_points_order_and_values():
    pts = lattice_points(2, 3)
    assert pts.shape == (9, 2)
    assert np.array_equal(pts[0], [0.0, 0.0])
    assert np.array_equal(pts[1], [0.0, 0.5])  # last axis fastest (C order)
    assert np.array_equal(pts[3], [0.5, 0.0])
    assert np.array_equal(pts[-1], [1.0, 1.0])


def test_flatten_index_roundtrip():
    pts = lattice_points(3, 4)
    for r in range(0, 64, 7):
        assert flatten_index(pts[r], 3, 4, "x") == r
    with pytest.raises(GridError):
        flatten_index([0.3, 0.0, 0.0], 3, 4, "x")


@pytest.mark.parametrize(
    "profits,k,expect",
    [
        ((0.0,), 2, 2),
        ((1.0,), 2, 4),
        ((0.5, 1.0), 3, 54),
    ],
)
def test_message_space_size_small_cases(profits, k, expect):
    prof = ValueProfile(profits, (0.0,) * len(profits))
    msgs = list(message_space(prof, k))
    assert len(msgs) == expect
    assert message_space_size(prof, k) == expect
    # every streamed report is feasible and on-grid
    grid = set(np.linspace(0.0, 1.0, k).tolist())
    for m in msgs:
        assert m.feasible_given(prof)
        assert set(m.reported_profits) <= grid
        assert set(m.reported_payoffs) <= grid
    assert len(set(msgs)) == expect  # no duplicates


@given(
    st.integers(2, 4),
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
)
@settings(max_examples=40, deadline=None)
def test_message_space_size_closed_form(k, idx):
    kk = min(k, 4)
    i0, i1 = min(idx[0], kk - 1), min(idx[1], kk - 1)
    grid = np.linspace(0.0, 1.0, kk)
    prof = ValueProfile((grid[i0], grid[i1]), (0.0, 0.0))
    assert message_space_size(prof, kk) == (i0 + 1) * (i1 + 1) * kk**2


def test_grid_mechanism_validation():
    with pytest.raises(ValueError):
        GridMechanism(2, 3, np.zeros((9, 8), dtype=int))
    with pytest.raises(ValueError):
        GridMechanism(2, 3, np.full((9, 9), 2))
    with pytest.raises(ValueError):
        GridMechanism(2, 3, np.zeros((9, 9), dtype=float))
    gm = GridMechanism(2, 3, np.zeros((9, 9), dtype=int))
    assert gm.decide([0.5, 1.0], [0.0, 0.0]) == 0


def test_from_table_matches_decide_table():
    from tablemech.core import decide_table

    tab = TableMechanismGrid.from_cutoffs(CutoffVector([0.5, 0.25]), 5)
    gm = GridMechanism.from_table(tab)
    grid = np.linspace(0.0, 1.0, 5)
    for multi in itertools.product(range(0, 5, 2), repeat=3):
        for pay in itertools.product(range(0, 5, 2), repeat=3):
            prof = ValueProfile(tuple(grid[list(multi)]), tuple(grid[list(pay)]))
            assert gm.decide(prof.profits, prof.payoffs) == decide_table(tab, prof)


def test_exact_discrete_eu_constant_rules():
    # always pick project 0: EU is the mean grid profit of coordinate 0
    gm = GridMechanism(2, 5, np.zeros((25, 25), dtype=int))
    assert exact_discrete_eu(gm) == pytest.approx(0.5)
    gm1 = GridMechanism(2, 5, np.ones((25, 25), dtype=int))
    assert exact_discrete_eu(gm1) == pytest.approx(0.5)


def test_exact_discrete_eu_single_cutoff_closed_form():
    # two projects, threshold c on the first, continuous payoffs split ties:
    # below the threshold the default's profit is taken, above it the mean of
    # the pair.  On a k-grid with c = 0.5 the average works out to
    # 0.5625 + 0.0625 / k exactly.
    for k in (5, 11, 101):
        tab = TableMechanismGrid.from_cutoffs(CutoffVector([0.5]), k)
        got = exact_discrete_eu(tab)
        assert got == pytest.approx(0.5625 + 0.0625 / k, abs=1e-12)
    assert abs(exact_discrete_eu(
        TableMechanismGrid.from_cutoffs(CutoffVector([0.5]), 101)
    ) - 0.5625) < 0.01  # within O(1/k) of the continuous value


def test_exact_discrete_eu_converges_like_one_over_k():
    # |discrete - continuous| <= C / k with one constant across resolutions
    from tablemech.analytic import multi_cutoff_eu

    cv = CutoffVector([0.6, 0.3])
    target = multi_cutoff_eu(cv)
    C = 0.08
    for k in (11, 51, 201):
        got = exact_discrete_eu(TableMechanismGrid.from_cutoffs(cv, k))
        assert abs(got - target) <= C / k


def test_exact_discrete_eu_grid_vs_table_agree_for_generic_payoffs():
    # tabulated argmax (ties to low index) vs continuous tie-splitting differ
    # only on tie sets, which vanish as k grows; check they are close
    tab = TableMechanismGrid.from_cutoffs(CutoffVector([0.5]), 21)
    gm = GridMechanism.from_table(tab)
    assert abs(exact_discrete_eu(gm) - exact_discrete_eu(tab)) < 0.03


def test_export_decisions_csv(tmp_path):
    tab = TableMechanismGrid.from_cutoffs(CutoffVector([0.5]), 3)
    path = tmp_path / "dec.csv"
    rows = export_decisions_csv(tab, path)
    assert rows == 81
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "p0,p1,a0,a1,decision"
    assert len(lines) == 82
    # first row: all-zero profits and payoffs, only the default on the table
    assert lines[1] == "0,0,0,0,1"
    with pytest.raises(ValueError):
        export_decisions_csv(TableMechanismGrid.from_cutoffs(CutoffVector([0.5]), 40), tmp_path / "big.csv")
