import pytest

from fglschur.partitions import strict_partitions
from fglschur.series import series, substitute, y
from fglschur.tableaux import (
    check_conjectures,
    check_hook_sum,
    dual_grothendieck_g,
    enumerate_rpp,
    enumerate_tableaux,
    g_expansion,
    gp_poly,
    gq_poly,
    symmetric_under_swaps,
    tableau_weight,
)
from oracles import classical_P, classical_Q, rename_symbols, same


def _rows(tabs):
    return {t.rows for t in tabs}


def test_enumeration_examples():
    assert len(enumerate_tableaux((1,), 2)) == 4
    assert len(enumerate_tableaux((1,), 2, primed_rows_only=True)) == 2
    assert _rows(enumerate_tableaux((2,), 1, True)) == {(((1, True), (1, True)),), (((1, True), (1, False)),)}
    with pytest.raises(ValueError):
        enumerate_tableaux((1,), 0)


def test_weights():
    (a,) = [t for t in enumerate_tableaux((2,), 1, True) if t.rows == (((1, True), (1, False)),)]
    assert tableau_weight(a) == series("y1^2", 2)
    (c,) = [t for t in enumerate_tableaux((2,), 1, True) if t.rows == (((1, True), (1, True)),)]
    assert tableau_weight(c) == series("y1", 1)
    (d,) = [t for t in enumerate_tableaux((1,), 2, True) if t.rows == (((2, True),),)]
    assert tableau_weight(d) == series("y2", 1)


def test_one_box():
    for n in (1, 2, 3):
        gp = gp_poly((1,), n)
        gq = gq_poly((1,), n)
        assert same(gp, rename_symbols(classical_P((1,), n), "x", "y", n))
        assert same(gq, rename_symbols(classical_Q((1,), n), "x", "y", n))


def test_small_values():
    assert gp_poly((2,), 1) == series("y1+y1^2", 2)
    assert gq_poly((2,), 1) == series("y1+2*y1^2", 2)
    assert dual_grothendieck_g((1,), 1) == series("y1", 1)
    assert dual_grothendieck_g((2,), 1) == series("y1^2", 2)
    assert dual_grothendieck_g((1, 1), 1) == series("y1", 2)
    assert len(enumerate_rpp((1, 1), 1)) == 1


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_hook_sum(k):
    r = check_hook_sum(k, 3)
    assert r.ok, r.witness


@pytest.mark.parametrize("lam", [(1,), (2,), (2, 1), (3, 1)])
def test_symmetric_and_stable(lam):
    for make in (gp_poly, gq_poly):
        f = make(lam, 3)
        assert symmetric_under_swaps(f, 3)
        assert substitute(make(lam, 4), {y(4): 0}) == f
    assert symmetric_under_swaps(dual_grothendieck_g((2, 1), 3), 3)


@pytest.mark.parametrize("n", [2, 3])
def test_top_degree_is_classical(n):
    for lam in strict_partitions(4, n):
        if not lam:
            continue
        d = sum(lam)
        top_p = gp_poly(lam, n).homogeneous(d)
        top_q = gq_poly(lam, n).homogeneous(d)
        assert same(top_p, rename_symbols(classical_P(lam, n), "x", "y", n)), lam
        assert same(top_q, rename_symbols(classical_Q(lam, n), "x", "y", n)), lam


def test_g_expansion_needs_enough_variables():
    # g_(1,1,1) does not vanish in two variables, so the g_mu are dependent there
    assert not dual_grothendieck_g((1, 1, 1), 2).is_zero()
    with pytest.raises(ValueError):
        g_expansion(gp_poly((3,), 2), 2)
    hooks = {(5,): 1, (4, 1): 1, (3, 1, 1): 1, (2, 1, 1, 1): 1, (1, 1, 1, 1, 1): 1}
    assert g_expansion(gp_poly((5,), 5), 5) == hooks
    assert g_expansion(gp_poly((5,), 6), 6) == hooks


def test_g_expansion_roundtrip():
    assert g_expansion(dual_grothendieck_g((2, 1), 3), 3) == {(2, 1): 1}
    exp = g_expansion(gp_poly((3,), 3), 3)
    assert exp == {(3,): 1, (2, 1): 1, (1, 1, 1): 1}


def test_conjectures_small():
    rep = check_conjectures(4, 4)
    for kind in ("gp", "gq"):
        for row in rep["results"][kind]:
            assert row["beta=-1"]["status"] == "PASS", row
            assert row["beta=+1"]["status"] == "PASS", row
    assert [r["status"] for r in rep["results"]["staircase"]] == ["PASS", "PASS"]
