"""Independent reference computations used by the tests.

Nothing here calls into the package except to convert its series into
sympy expressions.  The oracles are deliberately naive.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import sympy

from fglschur.series import TruncatedSeries

GEOMETRIC_PREFIXES = ("x", "y", "b")


def sym(name: str) -> sympy.Symbol:
    return sympy.Symbol(name)


def to_sympy(f: TruncatedSeries) -> sympy.Expr:
    out = sympy.Integer(0)
    for exps, c in f.terms():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for v, e in exps.items():
            term *= sym(str(v)) ** e
        out += term
    return sympy.expand(out)


def geometric_degree(mono: sympy.Expr) -> int:
    deg = 0
    for s, e in mono.as_powers_dict().items():
        if isinstance(s, sympy.Symbol) and s.name.startswith(GEOMETRIC_PREFIXES):
            deg += int(e)
    return deg


def truncate_sympy(expr: sympy.Expr, cutoff: int) -> sympy.Expr:
    expr = sympy.expand(expr)
    return sympy.Add(*[t for t in sympy.Add.make_args(expr) if geometric_degree(t) <= cutoff])


def same(f: TruncatedSeries, expr: sympy.Expr, cutoff: int | None = None) -> bool:
    d = f.cutoff if cutoff is None else cutoff
    return sympy.expand(truncate_sympy(to_sympy(f), d) - truncate_sympy(expr, d)) == 0


# formal group laws --------------------------------------------------------------------


def k_theory_sum(u, v, beta=sym("beta")):
    return u + v + beta * u * v


def universal_sum(u, v, cutoff: int):
    """``exp(log u + log v)`` with ``log t = t + sum m_k t^(k+1)``, by series reversion."""
    s = sym("x_s")
    ms = [sym(f"m{k}") for k in range(1, cutoff)]
    # exp(s): fixed point of e = s - sum m_k e^(k+1)
    e = s
    for _ in range(cutoff):
        e = truncate_sympy(s - sum(mk * e ** (k + 2) for k, mk in enumerate(ms)), cutoff)
    total = u + v + sum(mk * (u ** (k + 2) + v ** (k + 2)) for k, mk in enumerate(ms))
    return truncate_sympy(e.subs(s, total), cutoff)


# classical symmetric functions ---------------------------------------------------------


def _shifted_cells(lam):
    return [(i, j) for i, part in enumerate(lam) for j in range(i, i + part)]


@lru_cache(maxsize=None)
def classical_Q(lam: tuple[int, ...], n: int) -> sympy.Expr:
    """Schur Q from marked shifted tableaux.

    Letters ``1' < 1 < 2' < ...`` coded as ``2k-1`` (primed) and ``2k``.
    Rows and columns weakly increase, a primed letter appears at most once
    per row and an unprimed letter at most once per column.
    """
    cells = _shifted_cells(lam)
    xs = [sym(f"x{i}") for i in range(1, n + 1)]
    total = sympy.Integer(0)
    for filling in product(range(1, 2 * n + 1), repeat=len(cells)):
        t = dict(zip(cells, filling))
        ok = True
        for (i, j), c in t.items():
            left = t.get((i, j - 1))
            up = t.get((i - 1, j))
            if left is not None and (c < left or (c == left and c % 2 == 1)):
                ok = False
                break
            if up is not None and (c < up or (c == up and c % 2 == 0)):
                ok = False
                break
        if ok:
            mono = sympy.Integer(1)
            for c in filling:
                mono *= xs[(c + 1) // 2 - 1]
            total += mono
    return sympy.expand(total)


def classical_P(lam: tuple[int, ...], n: int) -> sympy.Expr:
    return sympy.expand(classical_Q(lam, n) / 2 ** len(lam))


def classical_s(lam: tuple[int, ...], n: int) -> sympy.Expr:
    """Bialternant ``det(x_i^(lam_j+n-j)) / det(x_i^(n-j))``."""
    if len(lam) > n:
        return sympy.Integer(0)
    parts = list(lam) + [0] * (n - len(lam))
    xs = [sym(f"x{i}") for i in range(1, n + 1)]
    num = sympy.Matrix(n, n, lambda i, j: xs[i] ** (parts[j] + n - 1 - j)).det()
    den = sympy.Matrix(n, n, lambda i, j: xs[i] ** (n - 1 - j)).det()
    return sympy.expand(sympy.cancel(num / den))


def rename_symbols(expr: sympy.Expr, old: str, new: str, count: int) -> sympy.Expr:
    return expr.subs({sym(f"{old}{i}"): sym(f"{new}{i}") for i in range(1, count + 1)}, simultaneous=True)
