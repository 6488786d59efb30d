import pytest

from fglschur.fgl import ADDITIVE, K_THEORY, UNIVERSAL
from fglschur.partitions import PartitionError, contains, partitions, strict_partitions
from fglschur.schur import (
    SymmetricSeries,
    diagonal_double,
    diagonal_P_corrected,
    diagonal_P_printed,
    diagonal_Q_printed,
    evaluate_double_vanishing,
    evaluate_vanishing,
    expand_in_basis,
    is_supersymmetric,
    reconstruct,
    schur_P,
    schur_Q,
    schur_s_double,
    schur_s_factorial,
    shifted_indices,
)
from fglschur.series import TruncatedSeries, b, series, substitute, x
from oracles import classical_P, classical_Q, classical_s, same

PROVIDERS = [ADDITIVE, K_THEORY, UNIVERSAL]
IDS = [p.label for p in PROVIDERS]


def _bzero(f: TruncatedSeries, count: int = 8) -> TruncatedSeries:
    return substitute(f, {b(i): 0 for i in range(-count, count + 1)})


def test_examples():
    assert schur_P((1,), 2, ADDITIVE, False, 4).value == series("x1+x2", 4)
    assert schur_P((), 3, K_THEORY, True, 4).value == TruncatedSeries.one(4)
    assert schur_Q((1,), 1, ADDITIVE, False, 3).value == series("2*x1", 3)
    assert schur_s_factorial((), 1, UNIVERSAL, True, 4).value == TruncatedSeries.one(4)
    assert schur_s_double((), 1, K_THEORY, 4).value == TruncatedSeries.one(4)


@pytest.mark.parametrize("p", PROVIDERS, ids=IDS)
def test_onevariable_q_is_doubled_power(p):
    from fglschur.fgl import factorial_power

    for k in range(1, 4):
        want = factorial_power(p, x(1), [b(i) for i in range(1, k)], k, True, 5)
        assert schur_Q((k,), 1, p, True, 5).value == want


def test_length_exceeds_variables():
    with pytest.raises((PartitionError, ValueError)):
        schur_P((2, 1), 1, ADDITIVE, False, 4)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_classical_p_q(n):
    for lam in strict_partitions(4, n):
        d = sum(lam)
        assert same(schur_P(lam, n, ADDITIVE, False, d).value, classical_P(lam, n)), lam
        assert same(schur_Q(lam, n, ADDITIVE, False, d).value, classical_Q(lam, n)), lam


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_classical_s(n):
    for lam in partitions(4, n):
        d = sum(lam)
        assert same(schur_s_factorial(lam, n, ADDITIVE, False, d).value, classical_s(lam, n)), lam
        assert same(_bzero(schur_s_double(lam, n, ADDITIVE, d).value), classical_s(lam, n)), lam


@pytest.mark.parametrize("p", PROVIDERS, ids=IDS)
def test_lowest_degree_is_classical(p):
    for lam in strict_partitions(3, 2):
        f = schur_P(lam, 2, p, True, sum(lam) + 1).value
        low = _bzero(f).homogeneous(sum(lam))
        assert same(low, classical_P(lam, 2))


@pytest.mark.parametrize("p", PROVIDERS, ids=IDS)
def test_fast_path_matches_reference(p):
    for lam in [(1,), (2,), (2, 1), (3, 1)]:
        for n in (2, 3):
            for make in (schur_P, schur_Q, schur_s_factorial):
                fast = make(lam, n, p, True, 5).value
                ref = make(lam, n, p, True, 5, reference=True).value
                assert fast == ref, (make.__name__, lam, n)
    assert schur_s_double((2, 1), 2, p, 5).value == schur_s_double((2, 1), 2, p, 5, reference=True).value


@pytest.mark.parametrize("p", PROVIDERS, ids=IDS)
def test_symmetric(p):
    f = schur_Q((2, 1), 3, p, True, 5).value
    for i in (1, 2):
        assert f.rename({x(i): x(i + 1), x(i + 1): x(i)}) == f


@pytest.mark.parametrize("p", PROVIDERS, ids=IDS)
def test_stability(p):
    for lam in [(1,), (2, 1), (3,)]:
        for n in (2, 3):
            q = schur_Q(lam, n, p, True, 4).value
            assert substitute(schur_Q(lam, n + 1, p, True, 4).value, {x(n + 1): 0}) == q
            pv = schur_P(lam, n, p, True, 4).value
            drop = {x(n + 1): 0, x(n + 2): 0}
            assert substitute(schur_P(lam, n + 2, p, True, 4).value, drop) == pv


def test_factorial_p_needs_even_steps():
    # one extra variable is not enough for the factorial P functions
    pv = schur_P((1,), 2, ADDITIVE, True, 4).value
    assert substitute(schur_P((1,), 3, ADDITIVE, True, 4).value, {x(3): 0}) != pv


def test_supersymmetry_examples():
    assert is_supersymmetric(SymmetricSeries(series("x1+x2"), 2, ADDITIVE)).ok
    rep = is_supersymmetric(SymmetricSeries(series("x1*x2"), 2, ADDITIVE))
    assert not rep.ok and rep.witness


@pytest.mark.parametrize("p", PROVIDERS, ids=IDS)
def test_supersymmetry(p):
    for n in (2, 3):
        for lam in strict_partitions(3, n):
            assert is_supersymmetric(schur_P(lam, n, p, True, 4)).ok
            assert is_supersymmetric(schur_Q(lam, n, p, True, 4), plus=True).ok


def test_q_squared_expansion():
    for n in (1, 2):
        q1 = schur_Q((1,), n, ADDITIVE, False, 2)
        sq = SymmetricSeries(q1.value * q1.value, n, ADDITIVE)
        exp = expand_in_basis(sq, "Q", False).nonzero()
        assert {k: str(v) for k, v in exp.items()} == {(2,): "2"}


@pytest.mark.parametrize("p", PROVIDERS, ids=IDS)
def test_expansion_idempotent_and_reconstructs(p):
    for lam in [(1,), (2, 1)]:
        f = schur_P(lam, 2, p, True, 4)
        exp = expand_in_basis(f, "P", True)
        assert {k for k, v in exp.nonzero().items()} == {lam}
        assert exp[lam] == TruncatedSeries.one(exp[lam].cutoff)
    g = schur_Q((1,), 2, p, True, 4)
    g2 = SymmetricSeries(g.value * g.value, 2, p)
    exp = expand_in_basis(g2, "Q", True)
    assert reconstruct(exp, 2, p, True, 4) == g2.value


def test_shifted_indices():
    assert shifted_indices((2,)) == (3, 1)
    assert shifted_indices((3, 1)) == (4, 2)
    assert shifted_indices(()) == ()


@pytest.mark.parametrize("p", PROVIDERS, ids=IDS)
def test_vanishing_examples(p):
    assert evaluate_vanishing((2,), (1,), "Q", p, 4).is_zero()
    bb1 = p.bar(b(1), 4)
    assert evaluate_vanishing((1,), (1,), "Q", p, 4) == p.formal_sum(bb1, bb1)
    # sh((1)) = (2, 1) evaluates at (bbar2, bbar1); the literal one-part product
    # bbar2 +_F b1 misses that the padded zero part contributes bbar1
    got = evaluate_vanishing((1,), (1,), "P", p, 4)
    assert got == p.formal_sum(p.bar(b(2), 4), bb1)
    assert got != p.formal_sum(p.bar(b(2), 4), TruncatedSeries.var(b(1), 4))


@pytest.mark.parametrize("p", PROVIDERS, ids=IDS)
def test_vanishing_diagonals(p):
    for lam in strict_partitions(3):
        assert evaluate_vanishing(lam, lam, "Q", p, 4) == diagonal_Q_printed(lam, p, 4)
        assert evaluate_vanishing(lam, lam, "P", p, 4) == diagonal_P_corrected(lam, p, 4)
        if len(lam) % 2 == 0:
            assert diagonal_P_corrected(lam, p, 4) == diagonal_P_printed(lam, p, 4)


def test_printed_p_diagonal_odd_length_differs():
    assert diagonal_P_printed((2,), ADDITIVE, 4) != evaluate_vanishing((2,), (2,), "P", ADDITIVE, 4)


@pytest.mark.parametrize("p", PROVIDERS, ids=IDS)
def test_double_vanishing(p):
    for lam in partitions(3):
        for mu in partitions(3):
            val = evaluate_double_vanishing(lam, mu, p, 4, max(len(lam), len(mu), 1))
            if lam == mu:
                assert val == diagonal_double(lam, p, 4)
            elif not contains(mu, lam):
                assert val.is_zero(), (lam, mu)
