"""Cauchy kernels and the dual (homological) bases.

The kernel ``Delta(x; y) = prod (1 - xbar_i y_j)/(1 - x_i y_j)`` is expanded in
the cohomological bases on the x side; the coefficients are the dual
functions.  Expansions on the y side (products and coproducts of duals) use a
separate triangular order: a dual ``phat_lam`` has a unique term free of b
and provider coefficients of top y-degree, namely the leading term of the
classical ``P_lam``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


from fglschur.fgl import FormalGroupLaw, factorial_power
from fglschur.partitions import partitions, strict_partitions
from fglschur.schur import (
    BasisExpansion,
    basis_element,
    expand_in_basis,
    schur_s_double,
    SymmetricSeries,
)
from fglschur.series import (
    DEFAULT_CUTOFF,
    Family,
    TriangularSolveError,
    TruncatedSeries,
    b,
    coefficient_of,
    decode,
    invert_unit,
    mul_full,
    triangular_expand,
    x,
    y,
)
from fglschur._kernels import add_terms, mul_terms
from fglschur.series import _REG, _mono_str

_DEG = 0x7F
_T = x(1)
_Y = y(1)


class StabilityError(ValueError):
    """Variable counts too small for the stable duals to be read off."""


def max_strict_length(size: int) -> int:
    r = 0
    while (r + 1) * (r + 2) // 2 <= size:
        r += 1
    return r


@dataclass(frozen=True)
class KernelSeries:
    value: TruncatedSeries
    n_x: int
    n_y: int

    @property
    def cutoff(self) -> int:
        return self.value.cutoff


@lru_cache(maxsize=None)
def _kernel_factor(p: FormalGroupLaw, cutoff: int) -> TruncatedSeries:
    """``(1 - tbar*y)/(1 - t*y)`` in the dummy pair ``(x1, y1)``."""
    ty = TruncatedSeries.var(_T, cutoff) * TruncatedSeries.var(_Y, cutoff)
    tbar_y = p.bar(_T, cutoff) * TruncatedSeries.var(_Y, cutoff)
    return (1 - tbar_y) * invert_unit(1 - ty)


@lru_cache(maxsize=None)
def _type_a_factor(p: FormalGroupLaw, i: int, cutoff: int) -> TruncatedSeries:
    """``(1 - bbar_i*y)/(1 - x_i*y)`` with ``y = y1``."""
    yy = TruncatedSeries.var(_Y, cutoff)
    num = 1 - p.bar(b(i), cutoff) * yy
    return num * invert_unit(1 - TruncatedSeries.var(x(i), cutoff) * yy)


def _kernel_product(factors, cutoff):
    out = TruncatedSeries.one(cutoff)
    for f in factors:
        out = out * f
    return out


@lru_cache(maxsize=64)
def kernel_delta(n_x: int, n_y: int, p: FormalGroupLaw, cutoff: int = DEFAULT_CUTOFF) -> KernelSeries:
    """``prod_{i<=n_x, j<=n_y} (1 - xbar_i y_j)/(1 - x_i y_j)``."""
    if n_x < 1 or n_y < 1:
        raise ValueError("kernel needs at least one x and one y variable")
    base = _kernel_factor(p, cutoff)
    factors = [base.rename({_T: x(i), _Y: y(j)}) for i in range(1, n_x + 1) for j in range(1, n_y + 1)]
    return KernelSeries(_kernel_product(factors, cutoff), n_x, n_y)


@lru_cache(maxsize=64)
def kernel_delta_type_a(n_x: int, n_y: int, p: FormalGroupLaw, cutoff: int = DEFAULT_CUTOFF) -> KernelSeries:
    """``prod_{i<=n_x, j<=n_y} (1 - bbar_i y_j)/(1 - x_i y_j)``."""
    factors = []
    for i in range(1, n_x + 1):
        base = _type_a_factor(p, i, cutoff)
        factors.extend(base.rename({_Y: y(j)}) for j in range(1, n_y + 1))
    return KernelSeries(_kernel_product(factors, cutoff), n_x, n_y)


# one-row duals -------------------------------------------------------------------


@lru_cache(maxsize=64)
def onerow_duals(
    kind: str, p: FormalGroupLaw, n_y: int, factorial: bool = True, cutoff: int = DEFAULT_CUTOFF
) -> tuple[TruncatedSeries, ...]:
    """All ``phat_k`` (``[[t|b]]^k`` basis) or ``qhat_k`` (``[t|b]^k`` basis), ``k <= cutoff``.

    ``phat_k`` equals the general ``phat_(k)``.  ``qhat_k`` equals the general
    ``qhat_(k)`` only at ``b = 0`` or for the additive law, because the
    even-limit ``P_(k)(t, 0, ... | b)`` is not ``[t|b]^k``.
    """
    if kind not in ("phat", "qhat"):
        raise ValueError(f"unknown one-row kind {kind!r}")
    delta = kernel_delta(1, n_y, p, cutoff).value
    bv = [b(i) for i in range(1, cutoff + 1)] if factorial else None
    doubled = kind == "phat"
    basis = [factorial_power(p, _T, bv, k, doubled, cutoff) for k in range(cutoff + 1)]
    return tuple(coefficient_of(delta, basis, _T))


def onerow_dual(
    k: int,
    kind: str,
    p: FormalGroupLaw,
    n_y: int = 4,
    factorial: bool = True,
    cutoff: int = DEFAULT_CUTOFF,
) -> TruncatedSeries:
    if k < 0 or k > cutoff:
        raise ValueError(f"k={k} outside 0..{cutoff}")
    return onerow_duals(kind, p, n_y, factorial, cutoff)[k]


# general duals -------------------------------------------------------------------


def check_stable_counts(n_x: int, cutoff: int, pairing: str) -> None:
    if n_x < cutoff:
        raise StabilityError(f"dual extraction needs n_x >= cutoff ({n_x} < {cutoff})")
    if pairing == "P_with_qhat" and n_x % 2:
        raise StabilityError("the P side uses the even stable limit: n_x must be even")


@lru_cache(maxsize=64)
def extract_duals(
    n_x: int,
    n_y: int,
    p: FormalGroupLaw,
    pairing: str = "Q_with_phat",
    factorial: bool = True,
    cutoff: int = DEFAULT_CUTOFF,
    enforce_stable: bool = True,
) -> BasisExpansion:
    """Expand the x side of ``Delta`` in the Q basis (giving phat) or the P basis (qhat).

    With ``enforce_stable=False`` only ``n_x >= max length of a strict
    partition of size <= cutoff`` (and evenness for P) is required; the
    coefficients agree because the bases are stable in the number of variables.
    """
    if pairing not in ("Q_with_phat", "P_with_qhat"):
        raise ValueError(f"unknown pairing {pairing!r}")
    if enforce_stable:
        check_stable_counts(n_x, cutoff, pairing)
    else:
        need = max_strict_length(cutoff)
        if n_x < need or (pairing == "P_with_qhat" and n_x % 2):
            raise StabilityError(f"n_x={n_x} too small for cutoff {cutoff}")
    basis = "Q" if pairing == "Q_with_phat" else "P"
    delta = kernel_delta(n_x, n_y, p, cutoff).value
    f = SymmetricSeries(delta, n_x, p, "Delta")
    exp = expand_in_basis(f, basis, factorial)
    return BasisExpansion("phat" if basis == "Q" else "qhat", dict(exp.entries))


def reconstruction_residual(
    n_x: int, n_y: int, p: FormalGroupLaw, pairing: str, factorial: bool, cutoff: int,
    enforce_stable: bool = True,
) -> TruncatedSeries:
    """``sum basis_lam(x|b) * dual_lam(y|b) - Delta`` (should vanish)."""
    duals = extract_duals(n_x, n_y, p, pairing, factorial, cutoff, enforce_stable)
    basis = "Q" if pairing == "Q_with_phat" else "P"
    delta = kernel_delta(n_x, n_y, p, cutoff).value
    acc = TruncatedSeries.zero(cutoff)
    for lam, c in duals.items():
        acc = acc + mul_full(c, basis_element(basis, lam, n_x, p, factorial, cutoff).value)
    return acc - delta


# type A ---------------------------------------------------------------------------


@lru_cache(maxsize=16)
def shat_dual(
    n_x: int, p: FormalGroupLaw, n_y: int | None = None, cutoff: int = DEFAULT_CUTOFF,
    enforce_stable: bool = True,
) -> BasisExpansion:
    """Expand the type-A kernel in the ``s_lam(x || b)`` basis; coefficients are ``shat_lam``."""
    if n_y is None:
        n_y = cutoff
    if enforce_stable and n_x < cutoff:
        raise StabilityError(f"shat extraction needs n_x >= cutoff ({n_x} < {cutoff})")
    kern = kernel_delta_type_a(n_x, n_y, p, cutoff).value
    elems = []
    for lam in partitions(cutoff, n_x):
        e = schur_s_double(lam, n_x, p, cutoff).value
        if not e.is_zero():
            elems.append((lam, e))
    sol = triangular_expand(kern, elems, [x(i) for i in range(1, n_x + 1)])
    return BasisExpansion("shat", sol)


def shat_residual(n_x, p, n_y=None, cutoff=DEFAULT_CUTOFF, enforce_stable=True) -> TruncatedSeries:
    n_y = cutoff if n_y is None else n_y
    duals = shat_dual(n_x, p, n_y, cutoff, enforce_stable)
    acc = TruncatedSeries.zero(cutoff)
    for lam, c in duals.items():
        acc = acc + mul_full(c, schur_s_double(lam, n_x, p, cutoff).value)
    return acc - kernel_delta_type_a(n_x, n_y, p, cutoff).value


# y-side triangular solve -----------------------------------------------------------


def _yside_key(mono: int):
    """``(b-degree + provider weight, -y-degree, lex-max y exponents)``."""
    defect = 0
    ydeg = 0
    yexp = []
    for v, e in decode(mono):
        if v.family is Family.Y:
            ydeg += e
            yexp.append((v.index, e))
        elif v.family is Family.B:
            defect += e
        elif v.family is Family.COEFF:
            defect += e * max(v.index, 1)
        else:
            defect += 1000 * e
    yexp.sort()
    return (defect, -ydeg, tuple((i, -e) for i, e in yexp))


def expand_in_duals(
    f: TruncatedSeries,
    duals: dict[tuple[int, ...], TruncatedSeries],
    yvars,
) -> dict[tuple[int, ...], TruncatedSeries]:
    """Solve ``f = sum c_lam * dual_lam`` with ``c_lam`` free of ``yvars``.

    Intended for exactly known polynomials (duals at ``b = 0``); every input
    is used as given and the solve stops when the residual vanishes.
    """
    from fglschur.series import shift_of

    shifts = [shift_of(v) for v in yvars]

    def ypart(mono):
        part = 0
        deg = 0
        for s in shifts:
            e = (mono >> s) & 0xFF
            if e:
                part += e << s
                deg += e
        return part + deg

    leads = {}
    for lam, d in duals.items():
        if d.is_zero():
            continue
        lead = min(d.raw_terms, key=_yside_key)
        lk = _yside_key(lead)
        if sum(1 for m in d.raw_terms if _yside_key(m) == lk) > 1:
            raise TriangularSolveError(f"dual {lam} has no unique leading term")
        if ypart(lead) != lead:
            raise TriangularSolveError(f"leading term of dual {lam} is not a pure y monomial")
        if lead in leads:
            raise TriangularSolveError(f"duals {leads[lead][0]} and {lam} share a leading term")
        leads[lead] = (lam, d, d.raw_terms[lead])
    guard = _REG.guard
    big = 60
    r = dict(f.raw_terms)
    acc = {lam: {} for lam in duals}
    while r:
        best = min(r, key=_yside_key)
        part = ypart(best)
        if part not in leads:
            raise TriangularSolveError(
                f"not in span: residual term {_mono_str(best)}", _mono_str(best)
            )
        lam, d, lc = leads[part]
        bk = _yside_key(best)
        chunk = {}
        for mono, c in r.items():
            if ypart(mono) == part and _yside_key(mono)[0] == bk[0]:
                chunk[mono - part] = c / lc
        for mono, c in chunk.items():
            acc[lam][mono] = acc[lam].get(mono, 0) + c
        r = add_terms(r, mul_terms(chunk, d.raw_terms, big, guard), -1)
    return {lam: TruncatedSeries._make({m: c for m, c in t.items() if c}, big) for lam, t in acc.items()}


# exact duals at b = 0 ----------------------------------------------------------------


def exact_duals(
    p: FormalGroupLaw, pairing: str, max_size: int, n_y: int, n_x: int | None = None
) -> dict[tuple[int, ...], TruncatedSeries]:
    """Duals at ``b = 0`` as exact polynomials for ``|lam| <= max_size``.

    At ``b = 0`` a dual has y-degree at most ``|lam|``, so extracting at cutoff
    ``2*max_size`` determines it completely.
    """
    cutoff = 2 * max_size
    if n_x is None:
        n_x = max_strict_length(cutoff)
        if pairing == "P_with_qhat":
            n_x += n_x % 2
    duals = extract_duals(n_x, n_y, p, pairing, False, cutoff, enforce_stable=False)
    out = {}
    for lam, c in duals.items():
        if sum(lam) > max_size:
            continue
        if c.cutoff < sum(lam) or c.degree() > sum(lam):
            raise StabilityError(f"dual {lam} not exactly determined")
        out[lam] = c._lift(60)
    return out


def restrict_y(f: TruncatedSeries, keep: int, total: int) -> TruncatedSeries:
    """Set ``y_(keep+1) .. y_total`` to zero."""
    from fglschur.series import shift_of

    shifts = [shift_of(y(j)) for j in range(keep + 1, total + 1)]
    return TruncatedSeries._make(
        {m: c for m, c in f.raw_terms.items() if not any((m >> s) & 0xFF for s in shifts)},
        f.cutoff,
    )


def shift_y(f: TruncatedSeries, offset: int, count: int) -> TruncatedSeries:
    """Rename ``y_j -> y_(j+offset)`` for ``j <= count``."""
    return f.rename({y(j): y(j + offset) for j in range(1, count + 1)})


# structure constants and coproducts ------------------------------------------------------


def structure_constants(
    lam, mu, basis: str, p: FormalGroupLaw, n: int | None = None, factorial: bool = True,
    cutoff: int | None = None,
) -> BasisExpansion:
    """``basis_lam * basis_mu = sum_nu c^nu basis_nu`` in ``n`` variables."""
    lam, mu = tuple(lam), tuple(mu)
    if cutoff is None:
        cutoff = sum(lam) + sum(mu)
    if n is None:
        n = max(max_strict_length(cutoff), 1)
        if basis == "P":
            n += n % 2
    a = basis_element(basis, lam, n, p, factorial, cutoff).value
    c = basis_element(basis, mu, n, p, factorial, cutoff).value
    prod = SymmetricSeries(a * c, n, p)
    return expand_in_basis(prod, basis, factorial)


def dual_product_constants(lam, mu, duals, n_y) -> dict:
    """``dual_lam * dual_mu = sum_nu chat^nu dual_nu`` for exact (b = 0) duals."""
    f = duals[tuple(lam)] * duals[tuple(mu)]
    return expand_in_duals(f, duals, [y(j) for j in range(1, n_y + 1)])


def coproduct_dual(nu, duals_2m: dict, duals_m: dict, m: int) -> dict:
    """``dual_nu(y' + y'')`` in the basis ``dual_lam(y') dual_mu(y'')`` (exact duals).

    ``duals_2m`` are duals in ``y_1..y_2m``, ``duals_m`` in ``y_1..y_m``.
    Returns ``{(lam, mu): coefficient}``.
    """
    f = duals_2m[tuple(nu)]
    first = expand_in_duals(f, duals_m, [y(j) for j in range(1, m + 1)])
    out = {}
    shifted = {k: shift_y(v, m, m) for k, v in duals_m.items()}
    for lam, c in first.items():
        if c.is_zero():
            continue
        second = expand_in_duals(c, shifted, [y(j) for j in range(m + 1, 2 * m + 1)])
        for mu, cc in second.items():
            if not cc.is_zero():
                out[(lam, mu)] = cc
    return out


def coproduct_basis(nu, basis: str, p: FormalGroupLaw, n: int, factorial: bool, cutoff: int) -> dict:
    """``basis_nu(x' + x'')`` in ``basis_lam(x') basis_mu(x'')`` with ``n`` variables each."""
    f = basis_element(basis, nu, 2 * n, p, factorial, cutoff).value
    xs1 = [x(i) for i in range(1, n + 1)]
    keys = strict_partitions(cutoff, n)
    first_basis = [(lam, basis_element(basis, lam, n, p, factorial, cutoff).value) for lam in keys]
    first_basis = [(k, v) for k, v in first_basis if not v.is_zero()]
    # x_(n+1)..x_2n play the role of coefficients in the first stage
    first = triangular_expand(f, first_basis, xs1)
    out = {}
    rename = {x(i): x(i + n) for i in range(1, n + 1)}
    for lam, c in first.items():
        if c.is_zero():
            continue
        second_basis = []
        for mu in strict_partitions(c.cutoff, n):
            e = basis_element(basis, mu, n, p, factorial, c.cutoff).value.rename(rename)
            if not e.is_zero():
                second_basis.append((mu, e))
        second = triangular_expand(c, second_basis, [x(i) for i in range(n + 1, 2 * n + 1)])
        for mu, cc in second.items():
            if not cc.is_zero():
                out[(lam, mu)] = cc
    return out


# printed one-row examples -------------------------------------------------------------


def _classical_y(kind: str, k: int, n_y: int, cutoff: int) -> TruncatedSeries:
    """Classical ``h_k``, ``P_k`` or ``Q_k`` in ``y_1..y_n_y``."""
    from fglschur.fgl import ADDITIVE
    from fglschur.partitions import schur_polynomial
    from fglschur.schur import schur_P, schur_Q

    if kind == "h":
        terms = {
            tuple(e): c for e, c in schur_polynomial((k,), n_y).items()
        }
        out = TruncatedSeries.zero(cutoff)
        for e, c in terms.items():
            mono = TruncatedSeries.one(cutoff)
            for j, ej in enumerate(e, start=1):
                if ej:
                    mono = mono * TruncatedSeries.var(y(j), cutoff) ** ej
            out = out + c * mono
        return out
    make = schur_P if kind == "P" else schur_Q
    val = make((k,), n_y, ADDITIVE, factorial=False, cutoff=cutoff).value
    return val.rename({x(j): y(j) for j in range(1, n_y + 1)})


def printed_onerow_formulas(p: FormalGroupLaw, n_y: int, cutoff: int) -> dict[str, TruncatedSeries]:
    """The one-row duals at ``b = 0`` as printed, with ``a_ij`` taken from ``p``."""
    a11 = p.coefficient_aij(1, 1, cutoff)
    a12 = p.coefficient_aij(1, 2, cutoff)

    def c(kind, k):
        return _classical_y(kind, k, n_y, cutoff)

    h1, h2 = c("h", 1), c("h", 2)
    return {
        "qhat_1": c("Q", 1),
        "qhat_2": c("Q", 2) - a11 * h1,
        "qhat_3": c("Q", 3) + 2 * a11 * h2 - 3 * a11 * h1 * h1 + a11 * a11 * h1,
        "phat_1": c("P", 1),
        "phat_2": c("P", 2) + a11 * h1,
        "phat_3": c("P", 3) + a11 * h2 - 2 * a11 * h1 * h1 + (a11 * a11 - a12) * h1,
    }


def compare_printed_onerow(p: FormalGroupLaw, n_y: int = 4, max_k: int = 3) -> dict[str, dict]:
    """Recompute one-row duals at ``b = 0`` and compare them with the printed values.

    ``phat_k`` and ``qhat_k`` at ``b = 0`` are polynomials of degree ``k`` in
    ``y``; extracting at cutoff ``2k`` makes them exact.  Each entry reports
    the match and, on mismatch, the recomputed minus printed difference.
    """
    cutoff = 2 * max_k
    printed = printed_onerow_formulas(p, n_y, cutoff)
    out = {}
    for kind in ("qhat", "phat"):
        duals = onerow_duals(kind, p, n_y, factorial=False, cutoff=cutoff)
        for k in range(1, max_k + 1):
            name = f"{kind}_{k}"
            got = duals[k].truncate(cutoff - k)
            want = printed[name].truncate(cutoff - k)
            diff = got - want
            out[name] = {
                "match": diff.is_zero(),
                "recomputed": str(got),
                "difference": str(diff),
            }
    return out


__all__ = [
    "KernelSeries",
    "StabilityError",
    "check_stable_counts",
    "compare_printed_onerow",
    "coproduct_basis",
    "coproduct_dual",
    "dual_product_constants",
    "exact_duals",
    "expand_in_duals",
    "extract_duals",
    "kernel_delta",
    "kernel_delta_type_a",
    "max_strict_length",
    "onerow_dual",
    "onerow_duals",
    "printed_onerow_formulas",
    "reconstruction_residual",
    "restrict_y",
    "shat_dual",
    "shat_residual",
    "shift_y",
    "structure_constants",
]
