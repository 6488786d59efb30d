"""Universal factorial Schur P, Q and s functions.

Every function here is a symmetrization ``sum_w w[h(x)]`` of a rational
expression whose denominator is a product of ``x_i +_F xbar_j``.  Writing
``x_i +_F xbar_j = (x_i - x_j) u(x_i, x_j)`` with a unit ``u`` turns the sum
into ``A(g) / V``: ``A`` is the antisymmetrizer, ``V`` the Vandermonde product
and ``g`` a power series.  ``A(x^a)/V`` is a signed classical Schur polynomial
(bialternant formula), so the quotient is read off term by term and no series
division is needed.  The literal orbit sum followed by one exact division by
``V`` is kept as :func:`symmetrize_reference` to cross-check the fast path.

The numerator ``g`` has valuation ``|lam| + n(n-1)/2`` and only its terms up
to ``cutoff + n(n-1)/2`` matter, so every factor is built to a fixed precision
above its own valuation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from math import factorial as _fact
from typing import Iterable, Sequence

from gmpy2 import mpq

from fglschur.fgl import FormalGroupLaw, factorial_power
from fglschur.partitions import (
    conjugate,
    contains,
    parity_of,
    partition,
    schur_polynomial,
    strict_partition,
    strict_partitions,
)
from fglschur.series import (
    DEFAULT_CUTOFF,
    DivisibilityError,
    TruncatedSeries,
    Variable,
    b,
    encode,
    exact_divide,
    invert_unit,
    mul_full,
    shift_of,
    substitute,
    triangular_expand,
    x,
)
from fglschur._kernels import add_terms, mul_terms
from fglschur.series import _REG

_DEG = 0x7F
_S = x(1)
_T = x(2)


@dataclass(frozen=True)
class SymmetricSeries:
    """A series in ``x_1..x_n`` (coefficients in b, y and provider variables)."""

    value: TruncatedSeries
    n: int
    provider: FormalGroupLaw
    label: str = ""

    @property
    def cutoff(self) -> int:
        return self.value.cutoff

    @property
    def xvars(self) -> list[Variable]:
        return [x(i) for i in range(1, self.n + 1)]

    def __str__(self):
        return str(self.value)


@dataclass
class BasisExpansion:
    """Coefficients of a series in a basis indexed by partitions."""

    basis: str
    entries: dict[tuple[int, ...], TruncatedSeries] = field(default_factory=dict)

    def __getitem__(self, lam) -> TruncatedSeries:
        return self.entries[tuple(lam)]

    def get(self, lam, default=None):
        return self.entries.get(tuple(lam), default)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def nonzero(self) -> dict[tuple[int, ...], TruncatedSeries]:
        return {k: v for k, v in self.entries.items() if not v.is_zero()}

    def to_json_obj(self) -> dict:
        return {
            "basis": self.basis,
            "entries": [
                {"partition": list(k), "coefficient": v.to_json_obj()}
                for k, v in sorted(self.entries.items(), key=lambda kv: (sum(kv[0]), kv[0]))
            ],
        }


# unit parts of the formal difference ---------------------------------------


@lru_cache(maxsize=None)
def _unit_u(p: FormalGroupLaw, c: int) -> TruncatedSeries:
    """``u(s,t) = (s +_F tbar)/(s - t)`` at cutoff ``c`` in the dummy pair."""
    top = c + 1
    diff = TruncatedSeries.var(_S, top) - TruncatedSeries.var(_T, top)
    return exact_divide(p.bivariate_minus(top), diff)


@lru_cache(maxsize=None)
def _unit_u_inverse(p: FormalGroupLaw, c: int) -> TruncatedSeries:
    return invert_unit(_unit_u(p, c))


@lru_cache(maxsize=None)
def _w_factor(p: FormalGroupLaw, c: int) -> TruncatedSeries:
    """``F(s,t)/u(s,t)`` at cutoff ``c``, so ``F/(s +_F tbar) = W/(s - t)``."""
    return mul_full(p.bivariate(c), _unit_u_inverse(p, c - 1))


def _pair(series: TruncatedSeries, i: int, j: int) -> TruncatedSeries:
    return series.rename({_S: x(i), _T: x(j)})


def _vandermonde_pair(i: int, j: int, cutoff: int) -> TruncatedSeries:
    return TruncatedSeries.var(x(i), cutoff) - TruncatedSeries.var(x(j), cutoff)


def _product(factors: list[TruncatedSeries], cutoff_floor: int) -> TruncatedSeries:
    out = None
    for f in factors:
        out = f if out is None else mul_full(out, f)
    if out is None:
        out = TruncatedSeries.one(cutoff_floor)
    return out


# bialternant -----------------------------------------------------------------


@lru_cache(maxsize=None)
def _packed_schur(mu: tuple[int, ...], n: int) -> dict:
    xs = [x(i) for i in range(1, n + 1)]
    out = {}
    for exps, c in schur_polynomial(mu, n).items():
        out[encode({v: e for v, e in zip(xs, exps) if e})] = mpq(c)
    return out


def antisymmetrize_over_vandermonde(g: TruncatedSeries, n: int) -> TruncatedSeries:
    """``A(g)/V`` for ``A`` the antisymmetrizer in ``x_1..x_n``.

    Uses ``A(x^a)/V = sign * s_{sort(a) - delta}``; the result carries cutoff
    ``g.cutoff - n(n-1)/2``.
    """
    big_n = n * (n - 1) // 2
    out_cut = g.cutoff - big_n
    if out_cut < 0:
        raise ValueError("numerator precision is below the Vandermonde degree")
    shifts = [shift_of(x(i)) for i in range(1, n + 1)]
    delta = list(range(n - 1, -1, -1))
    acc: dict[tuple[int, ...], dict] = {}
    for mono, c in g.raw_terms.items():
        exps = [(mono >> s) & 0xFF for s in shifts]
        if len(set(exps)) < n:
            continue
        rest = mono
        for s, e in zip(shifts, exps):
            if e:
                rest -= (e << s) + e
        sign = parity_of(exps)
        srt = sorted(exps, reverse=True)
        mu = tuple(a - d for a, d in zip(srt, delta))
        while mu and mu[-1] == 0:
            mu = mu[:-1]
        bucket = acc.setdefault(mu, {})
        bucket[rest] = bucket.get(rest, 0) + (c if sign > 0 else -c)
    guard = _REG.guard
    total: dict = {}
    for mu in sorted(acc):
        coeff = {k: v for k, v in acc[mu].items() if v}
        if not coeff:
            continue
        total = add_terms(total, mul_terms(coeff, _packed_schur(mu, n), out_cut, guard), 1)
    return TruncatedSeries._make(total, out_cut)


def _vandermonde(n: int, cutoff: int) -> TruncatedSeries:
    v = TruncatedSeries.one(60)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            v = mul_full(v, _vandermonde_pair(i, j, 60))
    return v


def symmetrize_reference(g: TruncatedSeries, n: int) -> TruncatedSeries:
    """Literal ``sum_w sign(w) w[g]`` followed by one exact division by ``V``."""
    xs = [x(i) for i in range(1, n + 1)]
    acc = TruncatedSeries.zero(g.cutoff)
    for perm in permutations(range(n)):
        sign = parity_of([-k for k in perm])
        term = g.rename({xs[k]: xs[perm[k]] for k in range(n)})
        acc = acc + term if sign > 0 else acc - term
    return exact_divide(acc, _vandermonde(n, g.cutoff))


# numerators -----------------------------------------------------------------


def _bvars(factorial: bool) -> list[Variable] | None:
    return [b(i) for i in range(1, 64)] if factorial else None


def _pq_numerator(
    lam: tuple[int, ...], n: int, p: FormalGroupLaw, factorial: bool, doubled: bool, rel: int
) -> TruncatedSeries:
    r = len(lam)
    bv = _bvars(factorial)
    factors = []
    for i, part in enumerate(lam, start=1):
        factors.append(factorial_power(p, x(i), bv, part, doubled, part + rel))
    w = _w_factor(p, 1 + rel)
    for i in range(1, r + 1):
        for j in range(i + 1, n + 1):
            factors.append(_pair(w, i, j))
    for i in range(r + 1, n + 1):
        for j in range(i + 1, n + 1):
            factors.append(_vandermonde_pair(i, j, 1 + rel))
    return _product(factors, rel)


def _s_numerator(
    lam: tuple[int, ...], n: int, p: FormalGroupLaw, bseq, rel: int
) -> TruncatedSeries:
    """``[x|b]^(lam+delta) * prod_{i<j} 1/u(x_i, x_j)``; ``bseq(i)`` lists b for row i."""
    padded = list(lam) + [0] * (n - len(lam))
    factors = []
    for i in range(1, n + 1):
        k = padded[i - 1] + n - i
        factors.append(factorial_power(p, x(i), bseq(i, k), k, False, k + rel))
    if n > 1:
        uinv = _unit_u_inverse(p, rel)
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                factors.append(_pair(uinv, i, j))
    return _product(factors, rel)


def _check_n(lam, n):
    if n < 1:
        raise ValueError("need at least one variable")
    if len(lam) > n:
        raise ValueError(f"partition {lam} has more than {n} parts")


# public constructors -----------------------------------------------------------


@lru_cache(maxsize=256)
def _schur_pq(lam, n, p, factorial, doubled, cutoff, reference) -> SymmetricSeries:
    lam = strict_partition(lam)
    _check_n(lam, n)
    name = ("Q" if doubled else "P") + str(list(lam))
    rel = cutoff - sum(lam)
    if rel < 0:
        return SymmetricSeries(TruncatedSeries.zero(cutoff), n, p, name)
    g = _pq_numerator(lam, n, p, factorial, doubled, rel)
    if reference:
        val = symmetrize_reference(g, n)
    else:
        val = antisymmetrize_over_vandermonde(g, n)
    denom = _fact(n - len(lam))
    if denom > 1:
        val = val.scale(mpq(1, denom))
        if p.integral and not val.is_integral():
            raise DivisibilityError(f"{name}: symmetrized sum is not divisible by {denom}")
    return SymmetricSeries(val.truncate(cutoff), n, p, name)


def schur_P(
    lam: Sequence[int],
    n: int,
    p: FormalGroupLaw,
    factorial: bool = True,
    cutoff: int = DEFAULT_CUTOFF,
    reference: bool = False,
) -> SymmetricSeries:
    """``P_lam(x_1..x_n | b)``; ``factorial=False`` sets every ``b_i = 0``."""
    return _schur_pq(tuple(lam), n, p, factorial, False, cutoff, reference)


def schur_Q(
    lam: Sequence[int],
    n: int,
    p: FormalGroupLaw,
    factorial: bool = True,
    cutoff: int = DEFAULT_CUTOFF,
    reference: bool = False,
) -> SymmetricSeries:
    """``Q_lam(x_1..x_n | b)`` built from doubled factorial powers."""
    return _schur_pq(tuple(lam), n, p, factorial, True, cutoff, reference)


@lru_cache(maxsize=256)
def _schur_s(lam, n, p, mode, cutoff, reference) -> SymmetricSeries:
    lam = partition(lam)
    _check_n(lam, n)
    rel = cutoff - sum(lam)
    label = {"plain": "s", "factorial": "s", "double": "s||"}[mode] + str(list(lam))
    if rel < 0:
        return SymmetricSeries(TruncatedSeries.zero(cutoff), n, p, label)
    if mode == "plain":
        def bseq(i, k):
            return None
    elif mode == "factorial":
        def bseq(i, k):
            return [b(l) for l in range(1, k + 1)]
    else:
        def bseq(i, k):
            return [b(n + 1 - l) for l in range(1, k + 1)]
    g = _s_numerator(lam, n, p, bseq, rel)
    val = symmetrize_reference(g, n) if reference else antisymmetrize_over_vandermonde(g, n)
    return SymmetricSeries(val.truncate(cutoff), n, p, label)


def schur_s_factorial(
    lam: Sequence[int],
    n: int,
    p: FormalGroupLaw,
    factorial: bool = True,
    cutoff: int = DEFAULT_CUTOFF,
    reference: bool = False,
) -> SymmetricSeries:
    """``s_lam(x_1..x_n | b)`` with factors ``[x_i|b]^(lam_i + n - i)``."""
    return _schur_s(tuple(lam), n, p, "factorial" if factorial else "plain", cutoff, reference)


def schur_s_double(
    lam: Sequence[int],
    n: int,
    p: FormalGroupLaw,
    cutoff: int = DEFAULT_CUTOFF,
    reference: bool = False,
) -> SymmetricSeries:
    """``s_lam(x_1..x_n || b)`` with factors ``prod_l (x +_F b_(n+1-l))``."""
    return _schur_s(tuple(lam), n, p, "double", cutoff, reference)


# supersymmetry ---------------------------------------------------------------


@dataclass
class SupersymmetryReport:
    symmetric: bool
    t_free: bool
    plus_checked: bool
    plus_ok: bool | None
    witness: str | None = None
    note: str = ""

    @property
    def ok(self) -> bool:
        base = self.symmetric and self.t_free
        if self.plus_checked:
            return base and bool(self.plus_ok)
        return base

    def __bool__(self):
        return self.ok

    def to_json_obj(self) -> dict:
        return {
            "ok": self.ok,
            "symmetric": self.symmetric,
            "t_free": self.t_free,
            "plus_checked": self.plus_checked,
            "plus_ok": self.plus_ok,
            "witness": self.witness,
            "note": self.note,
        }


def _first_diff(a: TruncatedSeries, c: TruncatedSeries) -> str | None:
    d = a - c
    if d.is_zero():
        return None
    exps, coeff = d.terms()[0]
    mono = "*".join(f"{v}^{e}" if e > 1 else str(v) for v, e in sorted(exps.items())) or "1"
    return f"{mono}: {a.coefficient(exps)} vs {c.coefficient(exps)}"


def is_supersymmetric(f: SymmetricSeries, plus: bool = False) -> SupersymmetryReport:
    """Symmetry, ``f(t, tbar, ...)`` free of ``t``, and (``plus``) the divisibility by ``t +_F t``.

    Over the rationals ``t +_F t = t * unit``, so divisibility alone says
    nothing; for integral providers the quotient must also be integral.
    """
    p, n, val = f.provider, f.n, f.value
    if n < 2:
        raise ValueError("supersymmetry needs at least two variables")
    xs = f.xvars
    for i in range(n - 1):
        swapped = val.rename({xs[i]: xs[i + 1], xs[i + 1]: xs[i]})
        if swapped != val:
            return SupersymmetryReport(
                False, False, plus, None, f"s{i + 1}: " + (_first_diff(swapped, val) or "")
            )
    t = xs[0]
    sub = substitute(val, {xs[1]: p.bar(t, val.cutoff)})
    bad = [(e, c) for e, c in sub.terms() if e.get(t)]
    if bad:
        e, c = bad[0]
        mono = "*".join(f"{v}^{k}" if k > 1 else str(v) for v, k in sorted(e.items()))
        return SupersymmetryReport(True, False, plus, None, f"t-dependence {c}*{mono}")
    if not plus:
        return SupersymmetryReport(True, True, False, None)
    diff = val - _set_zero(val, t)
    try:
        q = exact_divide(diff, p.add_vars(t, t, val.cutoff))
    except DivisibilityError as exc:
        return SupersymmetryReport(True, True, True, False, exc.witness)
    if p.integral:
        frac = [(e, c) for e, c in q.terms() if c.denominator != 1]
        if frac:
            e, c = frac[0]
            mono = "*".join(f"{v}^{k}" if k > 1 else str(v) for v, k in sorted(e.items())) or "1"
            return SupersymmetryReport(True, True, True, False, f"non-integral quotient {c}*{mono}")
        return SupersymmetryReport(True, True, True, True)
    return SupersymmetryReport(
        True, True, True, True, note="divisibility by t+t is automatic over the rationals"
    )


def _set_zero(f: TruncatedSeries, v: Variable) -> TruncatedSeries:
    s = shift_of(v)
    return TruncatedSeries._make(
        {k: c for k, c in f.raw_terms.items() if not (k >> s) & 0xFF}, f.cutoff
    )


# basis expansion ---------------------------------------------------------------


def basis_element(kind: str, lam, n, p, factorial, cutoff) -> SymmetricSeries:
    if kind == "P":
        return schur_P(lam, n, p, factorial, cutoff)
    if kind == "Q":
        return schur_Q(lam, n, p, factorial, cutoff)
    raise ValueError(f"unknown basis {kind!r}")


def expand_in_basis(
    f: SymmetricSeries, basis: str, factorial: bool = True, keys: Iterable | None = None
) -> BasisExpansion:
    """Coefficients ``c_lam`` free of x with ``f = sum c_lam * basis_lam`` at cutoff.

    Raises :class:`~fglschur.series.TriangularSolveError` when ``f`` is not in the span.
    """
    n, p, cutoff = f.n, f.provider, f.cutoff
    if keys is None:
        keys = strict_partitions(cutoff, n)
    elems = [(lam, basis_element(basis, lam, n, p, factorial, cutoff).value) for lam in keys]
    elems = [(lam, e) for lam, e in elems if not e.is_zero()]
    sol = triangular_expand(f.value, elems, f.xvars)
    return BasisExpansion(basis, sol)


def reconstruct(exp: BasisExpansion, n: int, p, factorial: bool, cutoff: int) -> TruncatedSeries:
    acc = TruncatedSeries.zero(cutoff)
    for lam, c in exp.items():
        acc = acc + mul_full(c, basis_element(exp.basis, lam, n, p, factorial, cutoff).value)
    return acc


# vanishing ---------------------------------------------------------------------


def shifted_indices(mu: Sequence[int]) -> tuple[int, ...]:
    """``sh(mu)``: add one to each part and append a part 1 when the length is odd."""
    out = tuple(m + 1 for m in mu)
    if len(mu) % 2:
        out += (1,)
    return out


def evaluate_vanishing(
    lam: Sequence[int],
    mu: Sequence[int],
    which: str,
    p: FormalGroupLaw,
    cutoff: int = DEFAULT_CUTOFF,
) -> TruncatedSeries:
    """``P_lam(bbar_sh(mu) | b)`` or ``Q_lam(bbar_mu | b)`` as a series in b."""
    lam = strict_partition(lam)
    mu = strict_partition(mu)
    if which == "P":
        pts = shifted_indices(mu)
        n = max(len(pts), len(lam), 1)
        n += n % 2
        f = schur_P(lam, n, p, True, cutoff)
    elif which == "Q":
        pts = mu
        n = max(len(pts), len(lam), 1)
        f = schur_Q(lam, n, p, True, cutoff)
    else:
        raise ValueError(f"unknown family {which!r}")
    return _evaluate_at_bbar(f.value, pts, n, p, cutoff)


def _evaluate_at_bbar(val, indices, n, p, cutoff):
    binds = {}
    for i in range(1, n + 1):
        if i <= len(indices):
            binds[x(i)] = p.bar(b(indices[i - 1]), cutoff)
        else:
            binds[x(i)] = TruncatedSeries.zero(cutoff)
    return substitute(val, binds)


def _fsum(p, u: TruncatedSeries, v: TruncatedSeries) -> TruncatedSeries:
    return p.formal_sum(u, v)


def _bbar(p, i, cutoff):
    return p.bar(b(i), cutoff)


def _bvar(i, cutoff):
    return TruncatedSeries.var(b(i), cutoff)


def diagonal_P_printed(lam: Sequence[int], p: FormalGroupLaw, cutoff=DEFAULT_CUTOFF):
    """The closed product for ``P_lam(bbar_sh(lam) | b)`` exactly as printed."""
    lam = strict_partition(lam)
    r = len(lam)
    out = TruncatedSeries.one(cutoff)
    for i in range(r):
        top = _bbar(p, lam[i] + 1, cutoff)
        skip = {lam[q] + 1 for q in range(i + 1, r)}
        for j in range(1, lam[i] + 1):
            if j not in skip:
                out = out * _fsum(p, top, _bvar(j, cutoff))
        for j in range(i + 1, r):
            out = out * _fsum(p, top, _bbar(p, lam[j] + 1, cutoff))
    return out


def diagonal_P_corrected(lam: Sequence[int], p: FormalGroupLaw, cutoff=DEFAULT_CUTOFF):
    """Diagonal value with ``lam`` padded by a zero part when its length is odd.

    The padding accounts for the extra evaluation point ``bbar_1`` that
    ``sh(lam)`` appends; for even length it coincides with the printed form.
    """
    lam = strict_partition(lam)
    r = len(lam)
    padded = list(lam) + ([0] if r % 2 else [])
    out = TruncatedSeries.one(cutoff)
    for i in range(r):
        top = _bbar(p, lam[i] + 1, cutoff)
        skip = {padded[q] + 1 for q in range(i + 1, len(padded))}
        for j in range(1, lam[i] + 1):
            if j not in skip:
                out = out * _fsum(p, top, _bvar(j, cutoff))
        for j in range(i + 1, len(padded)):
            out = out * _fsum(p, top, _bbar(p, padded[j] + 1, cutoff))
    return out


def diagonal_Q_printed(lam: Sequence[int], p: FormalGroupLaw, cutoff=DEFAULT_CUTOFF):
    """The closed product for ``Q_lam(bbar_lam | b)`` as printed."""
    lam = strict_partition(lam)
    r = len(lam)
    out = TruncatedSeries.one(cutoff)
    for i in range(r):
        top = _bbar(p, lam[i], cutoff)
        skip = {lam[q] for q in range(i + 1, r)}
        for j in range(1, lam[i]):
            if j not in skip:
                out = out * _fsum(p, top, _bvar(j, cutoff))
        for j in range(i, r):
            out = out * _fsum(p, top, _bbar(p, lam[j], cutoff))
    return out


# doubly infinite type A --------------------------------------------------------


def evaluate_double_vanishing(
    lam: Sequence[int], mu: Sequence[int], p: FormalGroupLaw, cutoff=DEFAULT_CUTOFF, n=None
) -> TruncatedSeries:
    """``s_lam(bbar_(I - mu) || b)``: ``x_i = bbar_(i - mu_i)``."""
    lam = partition(lam)
    mu = partition(mu)
    if n is None:
        n = max(len(lam), len(mu), 1)
    f = schur_s_double(lam, n, p, cutoff)
    padded = list(mu) + [0] * (n - len(mu))
    binds = {x(i): p.bar(b(i - padded[i - 1]), cutoff) for i in range(1, n + 1)}
    return substitute(f.value, binds)


def diagonal_double(lam: Sequence[int], p: FormalGroupLaw, cutoff=DEFAULT_CUTOFF):
    """``prod_{(i,j) in lam} (bbar_(i - lam_i) +_F b_(lam'_j - j + 1))``."""
    lam = partition(lam)
    conj = conjugate(lam)
    out = TruncatedSeries.one(cutoff)
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            out = out * _fsum(p, _bbar(p, i - row, cutoff), _bvar(conj[j - 1] - j + 1, cutoff))
    return out


def formal_pair_product(p: FormalGroupLaw, n: int, strict_upper: bool, cutoff: int) -> TruncatedSeries:
    """``prod_{i<j} (x_i +_F x_j)`` (``strict_upper``) or ``prod_{i<=j}``."""
    out = TruncatedSeries.one(cutoff)
    for i in range(1, n + 1):
        for j in range(i if not strict_upper else i + 1, n + 1):
            out = out * p.add_vars(x(i), x(j), cutoff)
    return out


__all__ = [
    "BasisExpansion",
    "SupersymmetryReport",
    "SymmetricSeries",
    "antisymmetrize_over_vandermonde",
    "basis_element",
    "contains",
    "diagonal_P_corrected",
    "diagonal_P_printed",
    "diagonal_Q_printed",
    "diagonal_double",
    "evaluate_double_vanishing",
    "evaluate_vanishing",
    "expand_in_basis",
    "formal_pair_product",
    "is_supersymmetric",
    "reconstruct",
    "schur_P",
    "schur_Q",
    "schur_s_double",
    "schur_s_factorial",
    "shifted_indices",
    "symmetrize_reference",
]
