import json

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from fglschur import _pykernels
from fglschur._kernels import BACKEND
from fglschur.fgl import ADDITIVE, K_THEORY, factorial_power
from fglschur.series import (
    BETA,
    CutoffMismatchError,
    CutoffTooLargeError,
    DivergenceError,
    DivisibilityError,
    NotInvertibleError,
    TriangularSolveError,
    TruncatedSeries,
    add,
    b,
    coefficient_of,
    exact_divide,
    invert_unit,
    mul_full,
    mul_truncated,
    series,
    substitute,
    x,
    y,
)
from oracles import same, sym, to_sympy

D = 4
VARS = [x(1), x(2), b(1), y(1), BETA]


@st.composite
def small_series(draw, cutoff=D, const=True):
    terms = draw(
        st.lists(
            st.tuples(
                st.lists(st.integers(0, 2), min_size=len(VARS), max_size=len(VARS)),
                st.integers(-3, 3),
            ),
            max_size=5,
        )
    )
    f = TruncatedSeries.zero(cutoff)
    for exps, c in terms:
        mono = dict(zip(VARS, exps))
        if not const and all(e == 0 for v, e in mono.items() if v.geometric):
            continue
        f = f + TruncatedSeries.monomial(mono, c, cutoff)
    return f


# examples -----------------------------------------------------------------------------


def test_add_examples():
    assert series("x1") + series("-x1") == TruncatedSeries.zero()
    assert add(series("x1+b1"), series("b1")) == series("x1+2*b1")


def test_add_cutoff_mismatch():
    with pytest.raises(CutoffMismatchError):
        add(series("x1", 3), series("x1", 4))


def test_mul_examples():
    assert mul_truncated(series("x1+x2", 2), series("x1-x2", 2)) == series("x1^2-x2^2", 2)
    assert mul_truncated(series("x1", 1), series("x1", 1)).is_zero()
    got = mul_truncated(series("1+beta*x1", 3), series("1-beta*x1+beta^2*x1^2", 3))
    assert got == series("1+beta^3*x1^3", 3)


def test_beta_has_degree_zero():
    f = series("beta^5*x1", 1)
    assert f.degree() == 1 and not f.is_zero()


def test_cutoff_limit():
    with pytest.raises(CutoffTooLargeError):
        TruncatedSeries({x(1): 1}, 13)
    assert TruncatedSeries({x(1): 1}, 13, allow_large=True).cutoff == 13


def test_substitute_examples():
    assert substitute(series("x1+b1"), {x(1): ADDITIVE.bar(b(1), 6)}).is_zero()
    assert substitute(series("x1"), {x(1): 0}).is_zero()
    f = factorial_power(K_THEORY, x(1), [b(1), b(2)], 2, False, 5)
    assert substitute(f, {x(1): K_THEORY.bar(b(2), 5)}).is_zero()


def test_substitute_divergence():
    with pytest.raises(DivergenceError):
        substitute(series("x1"), {x(1): series("1+y1")})


def test_invert_unit_examples():
    inv = invert_unit(series("1-x1*y1", 6))
    assert inv == series("1+x1*y1+x1^2*y1^2+x1^3*y1^3", 6)
    assert invert_unit(series("1")) == series("1")
    with pytest.raises(NotInvertibleError):
        invert_unit(series("x1"))
    with pytest.raises(NotInvertibleError):
        invert_unit(series("beta+x1"))


def test_invert_unit_formal_ratio():
    num = K_THEORY.formal_sum(TruncatedSeries.var(x(1), 5), K_THEORY.bar(x(2), 5))
    u = exact_divide(num, series("x1-x2", 5))
    inv = invert_unit(u)
    assert (u * inv).truncate(inv.cutoff) == TruncatedSeries.one(inv.cutoff)
    # u = 1/(1 + beta x2) for F = u + v + beta u v
    assert u == invert_unit(series("1+beta*x2", u.cutoff))


def test_exact_divide_examples():
    assert exact_divide(series("x1^2-x2^2"), series("x1-x2")) == series("x1+x2", 5)
    assert exact_divide(series("2*x1+beta*x1^2"), series("x1")) == series("2+beta*x1", 5)
    with pytest.raises(DivisibilityError) as err:
        exact_divide(series("x1^2+x2"), series("x1-x2"))
    assert err.value.witness


def test_kernel_minus_one_divisible_by_doubled():
    from fglschur.dual import kernel_delta

    for p in (ADDITIVE, K_THEORY):
        k = kernel_delta(1, 2, p, 6).value
        tt = p.formal_sum(TruncatedSeries.var(x(1), 6), TruncatedSeries.var(x(1), 6))
        q = exact_divide(k - 1, tt)
        assert (q * tt).truncate(q.cutoff) == (k - 1).truncate(q.cutoff)


def test_coefficient_of_examples():
    basis = [series("1"), series("x1"), series("x1^2")]
    got = coefficient_of(series("2*x1"), basis, x(1))
    assert [str(c) for c in got] == ["0", "2", "0"]
    with pytest.raises(TriangularSolveError):
        coefficient_of(series("x1"), [series("x1+x1^2"), series("x1")], x(1))


# properties ---------------------------------------------------------------------------


@given(small_series(), small_series(), small_series())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == TruncatedSeries.zero(D)
    assert f * TruncatedSeries.one(D) == f


@given(small_series(), small_series(), st.integers(0, D))
def test_truncation_is_a_ring_map(f, g, d):
    assert (f * g).truncate(d) == f.truncate(d) * g.truncate(d)
    assert (f + g).truncate(d) == f.truncate(d) + g.truncate(d)


@given(small_series(), small_series())
def test_mul_matches_sympy(f, g):
    assert same(f * g, to_sympy(f) * to_sympy(g))


@given(small_series(), small_series(const=False))
def test_mul_full_precision(f, g):
    full = mul_full(f, g)
    assert full.cutoff == min(f.cutoff + g.valuation(), g.cutoff + f.valuation()) or g.is_zero() or f.is_zero()
    assert full.truncate(D) == f * g


@given(small_series())
def test_invert_then_multiply(f):
    u = f - f.homogeneous(0) + 1
    inv = invert_unit(u)
    assert u * inv == TruncatedSeries.one(D)


@given(small_series(), small_series(const=False))
def test_divide_product(f, g):
    if g.is_zero():
        return
    q = exact_divide(f * g, g)
    assert q.truncate(q.cutoff) == f.truncate(q.cutoff)


@given(small_series())
def test_substitute_matches_sympy(f):
    val = series("x2*y1+b1^2", D)
    got = substitute(f, {x(1): val})
    want = to_sympy(f).subs(sym("x1"), sym("x2") * sym("y1") + sym("b1") ** 2)
    assert same(got, want)


@given(small_series())
def test_json_roundtrip(f):
    text = f.to_json()
    assert TruncatedSeries.from_json(text) == f
    assert TruncatedSeries.from_json(text).to_json() == text
    obj = json.loads(text)
    assert obj["cutoff"] == D


def test_json_canonical_form():
    f = series("3/6*x1 - x2^2", 3)
    obj = json.loads(f.to_json())
    assert obj["terms"][0] == {"den": "2", "monomial": {"x1": 1}, "num": "1"}


@pytest.mark.skipif(BACKEND != "cython", reason="compiled kernels not built")
@given(small_series(), small_series())
def test_compiled_kernel_matches_python(f, g):
    from fglschur import _ckernels
    from fglschur.series import _REG

    a, c = f.raw_terms, g.raw_terms
    assert _ckernels.mul_terms(a, c, D, _REG.guard) == _pykernels.mul_terms(a, c, D, _REG.guard)
    assert _ckernels.add_terms(a, c, -1) == _pykernels.add_terms(a, c, -1)


@pytest.mark.skipif(BACKEND != "cython", reason="compiled kernels not built")
def test_compiled_kernel_large_operands():
    from fglschur import _ckernels
    from fglschur.series import _REG

    f = (series("1+x1+x2+b1+y1", 8) ** 4) * mpq(7, 3)
    g = series("1-x1+2*x2-b1*y1+beta*x2", 8) ** 4
    big = g * (2**100)
    for a, c in ((f.raw_terms, g.raw_terms), (f.raw_terms, big.raw_terms)):
        assert _ckernels.mul_terms(a, c, 8, _REG.guard) == _pykernels.mul_terms(a, c, 8, _REG.guard)
