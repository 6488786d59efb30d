"""Shifted tableaux in the primed alphabet, gp/gq and dual stable Grothendieck g.

Letters are pairs ``(value, primed)`` ordered ``1' < 1 < 2' < 2 < ...``.
Row ``r`` (0-based) of a shifted shape occupies columns ``r .. r + lam_r - 1``.
The weight of a tableau counts, for each unprimed ``i``, the columns that
contain ``i`` and, for each primed ``i'``, the rows that contain ``i'``.

All polynomials here have degree at most ``|lam|``, so they are returned
exactly (cutoff ``|lam|`` unless a larger one is requested).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from fglschur.dual import exact_duals
from fglschur.fgl import FormalGroupLaw
from fglschur.partitions import (
    hook,
    partition,
    partitions,
    staircase,
    strict_partition,
    strict_partitions,
)
from fglschur.series import TruncatedSeries, y

Letter = tuple[int, bool]


def _code(letter: Letter) -> int:
    value, primed = letter
    return 2 * value - (1 if primed else 0)


def _letter(code: int) -> Letter:
    return ((code + 1) // 2, code % 2 == 1)


def letter_str(letter: Letter) -> str:
    return f"{letter[0]}'" if letter[1] else str(letter[0])


@dataclass(frozen=True)
class ShiftedTableau:
    shape: tuple[int, ...]
    rows: tuple[tuple[Letter, ...], ...]

    def cells(self) -> dict[tuple[int, int], Letter]:
        return {(r, r + j): v for r, row in enumerate(self.rows) for j, v in enumerate(row)}

    def __str__(self):
        return " / ".join(" ".join(letter_str(v) for v in row) for row in self.rows)


@dataclass(frozen=True)
class ReversePlanePartition:
    shape: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]


def _fillings(cells, above, left, max_code, first_primed) -> Iterator[list[int]]:
    grid: dict[tuple[int, int], int] = {}
    order = list(cells)

    def rec(k):
        if k == len(order):
            yield [grid[c] for c in order]
            return
        cell = order[k]
        lo = 1
        for nb in (above.get(cell), left.get(cell)):
            if nb is not None:
                lo = max(lo, grid[nb])
        step = 1
        if cell in first_primed:
            # primed codes are odd
            lo += 1 - (lo % 2)
            step = 2
        for code in range(lo, max_code + 1, step):
            grid[cell] = code
            yield from rec(k + 1)
        grid.pop(cell, None)

    yield from rec(0)


def enumerate_tableaux(lam: Sequence[int], max_letter: int, primed_rows_only: bool = False) -> list[ShiftedTableau]:
    """All shifted tableaux of shape ``lam`` with values ``<= max_letter``.

    ``primed_rows_only`` restricts to the subset whose rows start with a
    primed letter.  The order is row-major lexicographic.
    """
    if max_letter < 1:
        raise ValueError("max_letter must be at least 1")
    lam = strict_partition(lam)
    cells = [(r, r + j) for r, length in enumerate(lam) for j in range(length)]
    present = set(cells)
    above = {(r, c): (r - 1, c) for r, c in cells if (r - 1, c) in present}
    left = {(r, c): (r, c - 1) for r, c in cells if (r, c - 1) in present}
    first = {(r, r) for r in range(len(lam))} if primed_rows_only else set()
    out = []
    for codes in _fillings(cells, above, left, 2 * max_letter, first):
        it = iter(codes)
        rows = tuple(tuple(_letter(next(it)) for _ in range(length)) for length in lam)
        out.append(ShiftedTableau(lam, rows))
    return out


def weight_exponents(t: ShiftedTableau) -> dict[int, int]:
    cols: dict[int, set] = {}
    rows: dict[int, set] = {}
    for (r, c), (value, primed) in t.cells().items():
        if primed:
            rows.setdefault(value, set()).add(r)
        else:
            cols.setdefault(value, set()).add(c)
    out: dict[int, int] = {}
    for table in (cols, rows):
        for value, where in table.items():
            out[value] = out.get(value, 0) + len(where)
    return out


def tableau_weight(t: ShiftedTableau) -> TruncatedSeries:
    """``prod y_i^(columns containing i) * prod y_i^(rows containing i')``."""
    exps = weight_exponents(t)
    return TruncatedSeries.monomial({y(i): e for i, e in exps.items()}, 1, max(sum(exps.values()), 0))


def _accumulate(weights, n_y: int, cutoff: int) -> TruncatedSeries:
    acc: dict[tuple[int, ...], int] = {}
    for exps in weights:
        key = tuple(sorted(exps.items()))
        acc[key] = acc.get(key, 0) + 1
    return TruncatedSeries(
        (({y(i): e for i, e in key}, c) for key, c in sorted(acc.items())), cutoff
    )


def _tableau_poly(lam, n_y, cutoff, primed_rows_only):
    lam = strict_partition(lam)
    cutoff = sum(lam) if cutoff is None else cutoff
    tabs = enumerate_tableaux(lam, n_y, primed_rows_only) if n_y >= 1 else []
    return _accumulate((weight_exponents(t) for t in tabs), n_y, cutoff)


def gp_poly(lam, n_y: int, cutoff: int | None = None) -> TruncatedSeries:
    """Sum of tableau weights over tableaux whose rows start primed."""
    return _tableau_poly(lam, n_y, cutoff, True)


def gq_poly(lam, n_y: int, cutoff: int | None = None) -> TruncatedSeries:
    """Sum of tableau weights over all shifted tableaux."""
    return _tableau_poly(lam, n_y, cutoff, False)


def enumerate_rpp(lam: Sequence[int], max_value: int) -> list[ReversePlanePartition]:
    lam = partition(lam)
    cells = [(r, c) for r, length in enumerate(lam) for c in range(length)]
    above = {(r, c): (r - 1, c) for r, c in cells if r > 0}
    left = {(r, c): (r, c - 1) for r, c in cells if c > 0}
    out = []
    for vals in _fillings(cells, above, left, max_value, set()):
        it = iter(vals)
        out.append(ReversePlanePartition(lam, tuple(tuple(next(it) for _ in range(n)) for n in lam)))
    return out


def _rpp_exponents(t: ReversePlanePartition) -> dict[int, int]:
    cols: dict[int, set] = {}
    for r, row in enumerate(t.rows):
        for c, v in enumerate(row):
            cols.setdefault(v, set()).add(c)
    return {v: len(cs) for v, cs in cols.items()}


def dual_grothendieck_g(lam, n_y: int, cutoff: int | None = None) -> TruncatedSeries:
    """Reverse plane partitions weighted by the number of columns containing each value."""
    lam = partition(lam)
    cutoff = sum(lam) if cutoff is None else cutoff
    return _accumulate((_rpp_exponents(t) for t in enumerate_rpp(lam, n_y)), n_y, cutoff)


# reports -------------------------------------------------------------------------------


@dataclass
class Comparison:
    name: str
    ok: bool
    witness: str = ""
    asserted: bool = True
    extra: dict = field(default_factory=dict)

    def to_json_obj(self):
        out = {"name": self.name, "status": "PASS" if self.ok else "FAIL", "asserted": self.asserted}
        if self.witness:
            out["witness"] = self.witness
        if self.extra:
            out.update(self.extra)
        return out


def first_difference(a: TruncatedSeries, c: TruncatedSeries) -> str:
    d = a - c
    if d.is_zero():
        return ""
    exps, _ = sorted(d.terms(), key=lambda t: sorted((str(v), e) for v, e in t[0].items()))[0]
    mono = "*".join(f"{v}^{e}" if e > 1 else str(v) for v, e in sorted(exps.items())) or "1"
    return f"{mono}: {a.coefficient(exps)} vs {c.coefficient(exps)}"


def _compare(name, a, c, asserted=True) -> Comparison:
    d = min(a.cutoff, c.cutoff)
    a, c = a.truncate(d), c.truncate(d)
    ok = a == c
    return Comparison(name, ok, "" if ok else first_difference(a, c), asserted)


def check_hook_sum(k: int, n_y: int) -> Comparison:
    """``gp_k`` against the sum of ``g`` over the hooks ``(a, 1^(k-a))``."""
    if k < 1:
        raise ValueError("k must be positive")
    lhs = gp_poly((k,), n_y)
    rhs = TruncatedSeries.zero(k)
    for a in range(1, k + 1):
        rhs = rhs + dual_grothendieck_g(hook(a, k), n_y)
    return _compare(f"hook sum k={k}", lhs, rhs)


def _sign_normalized(f: TruncatedSeries, size: int) -> TruncatedSeries:
    """Multiply the degree ``d`` part by ``(-1)^(d - size)``."""
    out = TruncatedSeries.zero(f.cutoff)
    for d in range(0, f.cutoff + 1):
        part = f.homogeneous(d)
        if not part.is_zero():
            out = out + (part if (d - size) % 2 == 0 else -part)
    return out


def g_expansion(f: TruncatedSeries, n_y: int) -> dict[tuple[int, ...], int]:
    """Expand a symmetric polynomial in ``g_mu(y_1..y_n_y)`` from the top degree down.

    In fewer variables than the degree the ``g_mu`` are linearly dependent
    (``g_(1^k)`` survives with ``k > n_y``), so that case is refused.
    """
    if f.degree() > n_y:
        raise ValueError(f"g-expansion needs at least {f.degree()} variables, got {n_y}")
    rem = f
    out: dict[tuple[int, ...], int] = {}
    while not rem.is_zero():
        d = rem.degree()
        top = rem.homogeneous(d)
        best = max(top.terms(), key=lambda t: tuple(t[0].get(y(j), 0) for j in range(1, n_y + 1)))
        exps, c = best
        mu = tuple(e for e in (exps.get(y(j), 0) for j in range(1, n_y + 1)) if e)
        if list(mu) != sorted(mu, reverse=True):
            raise ValueError("input is not symmetric")
        out[mu] = out.get(mu, 0) + int(c)
        rem = rem - c * dual_grothendieck_g(mu, n_y, rem.cutoff)
    return out


def _sign_pattern(exp: dict, size: int) -> str:
    if all(c > 0 for c in exp.values()):
        return "positive"
    if all(c * (-1) ** (size - sum(mu)) > 0 for mu, c in exp.items()):
        return "alternating"
    return "mixed"


def check_conjectures(max_size: int, n_y: int, kinds: Sequence[str] = ("gp", "gq", "staircase")) -> dict:
    """Compare gp/gq with the K-theoretic duals and gp with g on staircases.

    Duals are taken at ``b = 0`` with ``beta = -1`` and, separately, at
    ``beta = +1`` with the degree ``d`` part multiplied by ``(-1)^(d-|lam|)``.
    One-row cases are a theorem and are marked asserted; the rest are
    reported only.  The g-expansion uses ``max(n_y, |lam|)`` variables.
    """
    report: dict = {"max_size": max_size, "n_y": n_y, "results": {}}
    duals = {}
    for beta in (-1, 1):
        p = FormalGroupLaw.multiplicative(beta)
        if "gp" in kinds:
            duals[("gp", beta)] = exact_duals(p, "Q_with_phat", max_size, n_y)
        if "gq" in kinds:
            duals[("gq", beta)] = exact_duals(p, "P_with_qhat", max_size, n_y)
    for kind in ("gp", "gq"):
        if kind not in kinds:
            continue
        rows = []
        make = gp_poly if kind == "gp" else gq_poly
        for lam in strict_partitions(max_size):
            if not lam:
                continue
            poly = make(lam, n_y)
            minus = duals[(kind, -1)][lam]
            plus = _sign_normalized(duals[(kind, 1)][lam], sum(lam))
            dual_name = "phat" if kind == "gp" else "qhat"
            c1 = _compare(f"{kind}{list(lam)} vs {dual_name}|beta=-1", poly, minus, len(lam) == 1)
            c2 = _compare(f"{kind}{list(lam)} vs {dual_name}|beta=+1 normalized", poly, plus, len(lam) == 1)
            n_g = max(n_y, sum(lam))
            exp = g_expansion(poly if n_g == n_y else make(lam, n_g), n_g)
            rows.append(
                {
                    "lambda": list(lam),
                    "beta=-1": c1.to_json_obj(),
                    "beta=+1": c2.to_json_obj(),
                    "g_expansion": {",".join(map(str, mu)) or "0": c for mu, c in sorted(exp.items())},
                    "g_sign_pattern": _sign_pattern(exp, sum(lam)),
                }
            )
        report["results"][kind] = rows
    if "staircase" in kinds:
        rows = []
        k = 1
        while sum(staircase(k)) <= max_size:
            rho = staircase(k)
            c = _compare(f"gp{list(rho)} vs g{list(rho)}", gp_poly(rho, n_y), dual_grothendieck_g(rho, n_y), False)
            rows.append(c.to_json_obj())
            k += 1
        report["results"]["staircase"] = rows
    return report


def symmetric_under_swaps(f: TruncatedSeries, n_y: int) -> bool:
    return all(f.rename({y(j): y(j + 1), y(j + 1): y(j)}) == f for j in range(1, n_y))


__all__ = [
    "Comparison",
    "ReversePlanePartition",
    "ShiftedTableau",
    "check_conjectures",
    "check_hook_sum",
    "dual_grothendieck_g",
    "enumerate_rpp",
    "enumerate_tableaux",
    "first_difference",
    "g_expansion",
    "gp_poly",
    "gq_poly",
    "letter_str",
    "partitions",
    "symmetric_under_swaps",
    "tableau_weight",
    "weight_exponents",
]
