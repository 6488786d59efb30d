"""K-theory: Weyl group action, divided differences and the phat recursion.

The type C Weyl group acts on strict partitions through the set model
(``s_0`` toggles the part 1, ``s_i`` exchanges ``i`` and ``i+1``) and on
the coefficient ring through ``b``: ``s_i`` swaps ``b_i, b_(i+1)`` and
``s_0`` sends ``b_1`` to its formal inverse.

On supersymmetric functions of ``x`` the reflection ``s_0`` also inserts
``b_1`` as a new first variable, ``f(x|b) -> f(b_1, x | bbar_1, b_2, ...)``;
supersymmetry makes this an involution.  For the kernel this means
``s_0(1/Delta) = 1/(Delta(b_1; y) Delta)``, so on series written as
``F * (1/Delta)`` the reflection ``s_0`` acts on ``F`` with an extra factor
``Delta(bbar_1; y)``.  :func:`twisted_reflection_factory` implements that action and
the recursion checks use it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from fglschur.dual import (
    extract_duals,
    kernel_delta,
    max_strict_length,
    onerow_duals,
    shat_dual,
)
from fglschur.fgl import K_THEORY, FormalGroupLaw
from fglschur.partitions import contains, strict_partition
from fglschur.schur import schur_Q
from fglschur.series import (
    DEFAULT_CUTOFF,
    DivisibilityError,
    PrecisionExhaustedError,
    TruncatedSeries,
    b,
    exact_divide,
    substitute,
    x,
    y,
)

DOWN, FIXED, UP = "down", "fixed", "up"


# Weyl action on strict partitions ---------------------------------------------------


def weyl_action_sp(i: int, lam: Sequence[int]) -> tuple[tuple[int, ...], str]:
    """``s_i`` on a strict partition viewed as a set of parts."""
    if i < 0:
        raise ValueError("simple reflections are indexed by i >= 0")
    parts = set(strict_partition(lam))
    if i == 0:
        if 1 in parts:
            parts.discard(1)
            direction = DOWN
        else:
            parts.add(1)
            direction = UP
    elif i + 1 in parts and i not in parts:
        parts.discard(i + 1)
        parts.add(i)
        direction = DOWN
    elif i in parts and i + 1 not in parts:
        parts.discard(i)
        parts.add(i + 1)
        direction = UP
    else:
        direction = FIXED
    return tuple(sorted(parts, reverse=True)), direction


def raising_word(lam: Sequence[int], prefer: str = "smallest") -> tuple[int, ...]:
    """Letters ``i_1, i_2, ...`` of a raising path from the empty partition to ``lam``.

    Each step is an ``up`` move staying inside ``lam``; ``prefer`` picks the
    smallest or largest admissible index.
    """
    target = strict_partition(lam)
    cur: tuple[int, ...] = ()
    word = []
    top = (target[0] if target else 0) + 1
    while cur != target:
        choices = []
        for i in range(0, top + 1):
            new, d = weyl_action_sp(i, cur)
            if d == UP and contains(target, new):
                choices.append((i, new))
        if not choices:
            raise ValueError(f"no raising step from {cur} towards {target}")
        i, cur = choices[0] if prefer == "smallest" else choices[-1]
        word.append(i)
    return tuple(word)


# action on the coefficient ring ----------------------------------------------------------


def _p(p):
    return K_THEORY if p is None else p


def simple_reflection_b(i: int, f: TruncatedSeries, p: FormalGroupLaw | None = None) -> TruncatedSeries:
    """``s_i`` acting on the b variables only."""
    p = _p(p)
    if i < 0:
        raise ValueError("simple reflections are indexed by i >= 0")
    if i == 0:
        return substitute(f, {b(1): p.bar(b(1), f.cutoff)})
    return f.rename({b(i): b(i + 1), b(i + 1): b(i)})


def root_element(i: int, p: FormalGroupLaw | None = None, cutoff: int = DEFAULT_CUTOFF, negative: bool = False):
    """``e(alpha_i)``, or ``e(-alpha_i)`` when ``negative``."""
    p = _p(p)
    if i == 0:
        if negative:
            bb = p.bar(b(1), cutoff)
            return p.formal_sum(bb, bb)
        return p.add_vars(b(1), b(1), cutoff)
    if negative:
        return p.sub_vars(b(i), b(i + 1), cutoff)
    return p.sub_vars(b(i + 1), b(i), cutoff)


def psi(i: int, f: TruncatedSeries, p: FormalGroupLaw | None = None, reflect=None) -> TruncatedSeries:
    """``(s_i f - f)/e(alpha_i)``; raises :class:`DivisibilityError` if not divisible."""
    p = _p(p)
    reflect = reflect or simple_reflection_b
    num = reflect(i, f, p) - f
    return exact_divide(num, root_element(i, p, num.cutoff + 1))


def hat_psi(i: int, f: TruncatedSeries, p: FormalGroupLaw | None = None, reflect=None) -> TruncatedSeries:
    """``-s_i psi_i``."""
    p = _p(p)
    reflect = reflect or simple_reflection_b
    return -reflect(i, psi(i, f, p, reflect), p)


def hat_psi_remark(i: int, f: TruncatedSeries, p: FormalGroupLaw | None = None, reflect=None) -> TruncatedSeries:
    """The generalized-cohomology form ``(s_i f - f)/e(-alpha_i)``."""
    p = _p(p)
    reflect = reflect or simple_reflection_b
    num = reflect(i, f, p) - f
    return exact_divide(num, root_element(i, p, num.cutoff + 1, negative=True))


# twisted action on F * (1/Delta) ---------------------------------------------------------


@lru_cache(maxsize=32)
def _delta_at_bbar1(p: FormalGroupLaw, n_y: int, cutoff: int) -> TruncatedSeries:
    kern = kernel_delta(1, n_y, p, cutoff).value
    return substitute(kern, {x(1): p.bar(b(1), cutoff)})


def twisted_reflection_factory(n_y: int):
    """``s_i`` on ``F`` where the series represented is ``F/Delta(x; y_1..y_n_y)``."""

    def reflect(i, f, p):
        out = simple_reflection_b(i, f, p)
        if i == 0:
            out = out * _delta_at_bbar1(p, n_y, f.cutoff)
        return out

    return reflect


def twisted_hat_psi(i: int, f: TruncatedSeries, n_y: int, p: FormalGroupLaw | None = None):
    return hat_psi(i, f, p, twisted_reflection_factory(n_y))


# GQ property -------------------------------------------------------------------------------


def reflect_supersymmetric(i: int, f: TruncatedSeries, n: int, p: FormalGroupLaw) -> TruncatedSeries:
    """``s_i`` on a supersymmetric ``f(x_1..x_(n+1) | b)`` viewed as a function of ``x_1..x_n``.

    ``f`` must be given in ``n + 1`` variables; for ``i = 0`` the extra
    variable becomes ``b_1`` and ``b_1`` becomes ``bbar_1``, otherwise the
    extra variable is set to zero.
    """
    if i == 0:
        return substitute(f, {x(n + 1): TruncatedSeries.var(b(1), f.cutoff), b(1): p.bar(b(1), f.cutoff)})
    g = substitute(f, {x(n + 1): TruncatedSeries.zero(f.cutoff)})
    return g.rename({b(i): b(i + 1), b(i + 1): b(i)})


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    compared_cutoff: int | None = None

    def to_json_obj(self):
        return {
            "name": self.name,
            "ok": self.ok,
            "detail": self.detail,
            "compared_cutoff": self.compared_cutoff,
        }


def _witness(a: TruncatedSeries, c: TruncatedSeries) -> str:
    d = a - c
    if d.is_zero():
        return ""
    exps, _ = d.terms()[0]
    mono = "*".join(f"{v}^{e}" if e > 1 else str(v) for v, e in sorted(exps.items())) or "1"
    return f"first difference at {mono}: {a.coefficient(exps)} vs {c.coefficient(exps)}"


def _not_compared(name: str) -> CheckResult:
    return CheckResult(name, False, "precision exhausted at this cutoff; nothing compared", -1)


def check_gq_property(
    lam, i: int, n: int = 4, p: FormalGroupLaw | None = None, cutoff: int = DEFAULT_CUTOFF
) -> CheckResult:
    """``psi_i(Q_lam) = 0`` if ``s_i lam >= lam``, else ``Q_(s_i lam) + beta Q_lam``."""
    p = _p(p)
    lam = strict_partition(lam)
    q_big = schur_Q(lam, n + 1, p, True, cutoff).value
    q = schur_Q(lam, n, p, True, cutoff).value
    num = reflect_supersymmetric(i, q_big, n, p) - q
    name = f"psi_{i} Q{list(lam)}"
    try:
        lhs = exact_divide(num, root_element(i, p, cutoff + 1))
    except PrecisionExhaustedError:
        return _not_compared(name)
    except DivisibilityError as exc:
        return CheckResult(name, False, f"not divisible: {exc}")
    new, d = weyl_action_sp(i, lam)
    if d == DOWN:
        rhs = schur_Q(new, n, p, True, cutoff).value + p.beta_series(cutoff) * q
    else:
        rhs = TruncatedSeries.zero(cutoff)
    ok = lhs == rhs
    return CheckResult(name, ok, "" if ok else _witness(lhs, rhs), min(lhs.cutoff, rhs.cutoff))


# recursion for phat --------------------------------------------------------------------------


@lru_cache(maxsize=16)
def k_duals(n_y: int, cutoff: int, p: FormalGroupLaw | None = None, pairing: str = "Q_with_phat", n_x: int | None = None):
    p = _p(p)
    if n_x is None:
        n_x = max(max_strict_length(cutoff), 1)
        if pairing == "P_with_qhat":
            n_x += n_x % 2
        stable = False
    else:
        stable = True
    return extract_duals(n_x, n_y, p, pairing, True, cutoff, enforce_stable=stable)


def verify_recursion(
    lam, i: int, n_y: int = 4, cutoff: int = DEFAULT_CUTOFF, p: FormalGroupLaw | None = None,
    n_x: int | None = None,
) -> CheckResult:
    """Check ``hat_psi_i(phat_lam/Delta)`` against ``beta*phat_lam/Delta``, ``0`` or ``phat_(s_i lam)/Delta``."""
    p = _p(p)
    lam = strict_partition(lam)
    duals = k_duals(n_y, cutoff, p, "Q_with_phat", n_x)
    f = duals.get(lam)
    name = f"hat_psi_{i} phat{list(lam)}"
    if f is None:
        return CheckResult(name, False, "dual not available at this cutoff; nothing compared", -1)
    try:
        lhs = twisted_hat_psi(i, f, n_y, p)
    except PrecisionExhaustedError:
        return _not_compared(name)
    new, d = weyl_action_sp(i, lam)
    if d == DOWN:
        rhs = p.beta_series(cutoff) * f
    elif d == FIXED:
        rhs = TruncatedSeries.zero(lhs.cutoff)
    else:
        rhs = duals.get(new, TruncatedSeries.zero(max(cutoff - sum(new), 0)))
    ok = lhs == rhs
    return CheckResult(name, ok, "" if ok else _witness(lhs, rhs), min(lhs.cutoff, rhs.cutoff))


def phatK_by_word(
    lam, n_y: int = 4, cutoff: int = DEFAULT_CUTOFF, p: FormalGroupLaw | None = None,
    word: Sequence[int] | None = None,
) -> TruncatedSeries:
    """Apply ``hat_psi`` along a raising word to ``1/Delta`` and strip the ``1/Delta``."""
    p = _p(p)
    if word is None:
        word = raising_word(lam)
    f = TruncatedSeries.one(cutoff)
    for i in word:
        f = twisted_hat_psi(i, f, n_y, p)
    return f


def check_word(lam, n_y=4, cutoff=DEFAULT_CUTOFF, p=None) -> CheckResult:
    """``phatK_by_word`` against kernel extraction, plus independence of the raising path."""
    p = _p(p)
    lam = strict_partition(lam)
    duals = k_duals(n_y, cutoff, p)
    target = duals.get(lam)
    name = f"word phat{list(lam)}"
    if target is None:
        return CheckResult(name, False, "dual not available at this cutoff; nothing compared", -1)
    w1 = raising_word(lam, "smallest")
    w2 = raising_word(lam, "largest")
    try:
        a = phatK_by_word(lam, n_y, cutoff, p, w1)
        c = phatK_by_word(lam, n_y, cutoff, p, w2) if w2 != w1 else a
    except PrecisionExhaustedError:
        return _not_compared(name)
    ok = a == target
    detail = "" if ok else _witness(a, target)
    if w2 != w1:
        if not c == a:
            ok = False
            detail += f"; words {w1} and {w2} disagree: " + _witness(a, c)
        else:
            detail += f" words {w1} and {w2} agree"
    return CheckResult(name, ok, detail.strip(), min(a.cutoff, target.cutoff))


# one-row variant of the remark -----------------------------------------------------------------


def onerow_by_remark(k: int, kind: str, n_y: int, cutoff: int, p: FormalGroupLaw | None = None) -> TruncatedSeries:
    """One-row duals from ``(s_i f - f)/e(-alpha_i)`` along ``s_0, s_1, ..., s_(k-1)``."""
    p = _p(p)
    reflect = twisted_reflection_factory(n_y)
    f = TruncatedSeries.one(cutoff)
    for i in range(k):
        f = hat_psi_remark(i, f, p, reflect)
    return f


# type A ------------------------------------------------------------------------------------------


def maya_action(k: int, lam: Sequence[int]) -> tuple[tuple[int, ...], str]:
    """Type A ``s_k`` (``k`` any integer) on a partition via ``{i - lam_i}``."""
    lam = list(lam)
    length = len(lam)
    rows = max(length, k + 1) + 2
    padded = lam + [0] * (rows - length)
    maya = {i + 1 - padded[i]: i for i in range(rows)}
    if k + 1 in maya and k not in maya:
        row = maya[k + 1]
        padded[row] += 1
        direction = UP
    elif k in maya and k + 1 not in maya:
        row = maya[k]
        padded[row] -= 1
        direction = DOWN
    else:
        direction = FIXED
    out = tuple(p for p in padded if p > 0)
    return out, direction


def raising_word_a(lam: Sequence[int]) -> tuple[int, ...]:
    target = tuple(lam)
    cur: tuple[int, ...] = ()
    word = []
    while cur != target:
        for k in range(-len(target) - (target[0] if target else 0), len(target) + 2):
            new, d = maya_action(k, cur)
            if d == UP and contains(target, new):
                word.append(k)
                cur = new
                break
        else:
            raise ValueError(f"no type A raising step from {cur}")
    return tuple(word)


@lru_cache(maxsize=32)
def _type_a_ratio(p: FormalGroupLaw, n_y: int, cutoff: int) -> TruncatedSeries:
    """``prod_j (1 - bbar_1 y_j)/(1 - bbar_0 y_j)``: ``s_0`` applied to ``1/Delta^A`` over ``1/Delta^A``."""
    from fglschur.series import invert_unit

    out = TruncatedSeries.one(cutoff)
    for j in range(1, n_y + 1):
        yy = TruncatedSeries.var(y(j), cutoff)
        out = out * (1 - p.bar(b(1), cutoff) * yy) * invert_unit(1 - p.bar(b(0), cutoff) * yy)
    return out


def _reflect_a_factory(n_y: int):
    def reflect(k, f, p):
        out = f.rename({b(k): b(k + 1), b(k + 1): b(k)})
        if k == 0:
            out = out * _type_a_ratio(p, n_y, f.cutoff)
        return out

    return reflect


def _psi_a(k, f, p, reflect):
    # with the kernel oriented as prod (1 - bbar_i y)/(1 - x_i y) the raising
    # operator is psi_k itself (equivalently hat_psi_k with the root negated)
    num = reflect(k, f, p) - f
    e = p.sub_vars(b(k + 1), b(k), num.cutoff + 1)
    return exact_divide(num, e)


def shatK_by_word(lam, n_y: int = 4, cutoff: int = DEFAULT_CUTOFF, p: FormalGroupLaw | None = None):
    p = _p(p)
    reflect = _reflect_a_factory(n_y)
    f = TruncatedSeries.one(cutoff)
    for k in raising_word_a(lam):
        f = _psi_a(k, f, p, reflect)
    return f


def check_type_a(lam, n_y: int = 4, cutoff: int = DEFAULT_CUTOFF, p=None, n_x: int | None = None) -> CheckResult:
    p = _p(p)
    if n_x is None:
        n_x = max(sum(lam), 1) + 1
    duals = shat_dual(n_x, p, n_y, cutoff, enforce_stable=False)
    target = duals.get(tuple(lam))
    a = shatK_by_word(lam, n_y, cutoff, p)
    ok = target is not None and a == target
    return CheckResult(
        f"type A shat{list(lam)}", ok, "" if ok else _witness(a, target), min(a.cutoff, target.cutoff)
    )


# type D (report only) ---------------------------------------------------------------------------


def type_d_report(n_y: int = 2, cutoff: int = 4, p: FormalGroupLaw | None = None) -> dict:
    """Experiment for the type D node ``s_1hat``: ``b_1 -> bbar_2, b_2 -> bbar_1``.

    On ``F/Delta`` it is taken to insert ``b_1, b_2`` as new x variables,
    contributing ``Delta(bbar_1; y) Delta(bbar_2; y)``.  The candidate
    ``hat_psi_1hat(1/Delta)`` is compared with the kernel dual ``qhat_(1)``
    from the even-limit P basis (and, for reference, with the one-row
    ``[t|b]``-basis ``qhat_1``, which differs once ``b != 0``); the conventions
    are not fixed by the source, so the outcome is reported, never asserted.
    """
    p = _p(p)
    kern = kernel_delta(1, n_y, p, cutoff).value

    def reflect(f):
        g = substitute(f, {b(1): p.bar(b(2), f.cutoff), b(2): p.bar(b(1), f.cutoff)})
        extra = substitute(kern, {x(1): p.bar(b(1), f.cutoff)}) * substitute(
            kern, {x(1): p.bar(b(2), f.cutoff)}
        )
        return g * extra

    one = TruncatedSeries.one(cutoff)
    num = reflect(one) - one
    e = p.add_vars(b(1), b(2), num.cutoff + 1)
    try:
        cand = -reflect(exact_divide(num, e))
    except DivisibilityError as exc:
        return {"status": "not divisible", "detail": str(exc)}
    n_x = max(max_strict_length(cutoff), 1)
    n_x += n_x % 2
    qhat1 = extract_duals(n_x, n_y, p, "P_with_qhat", True, cutoff, enforce_stable=False)[(1,)]
    onerow = onerow_duals("qhat", p, n_y, True, cutoff)[1]
    d = min(cand.cutoff, qhat1.cutoff)
    same = cand.truncate(d) == qhat1.truncate(d)
    return {
        "status": "match" if same else "mismatch",
        "compared_cutoff": d,
        "candidate": str(cand.truncate(min(d, 2))),
        "qhat_1": str(qhat1.truncate(min(d, 2))),
        "matches_onerow_qhat_1": cand.truncate(d) == onerow.truncate(d),
        "note": "type D conventions unverified; informational only",
    }


def pi_note() -> str:
    return (
        "psi_i(1) = 0 since s_i(1) = 1; under psi_i = pi_i + beta this means pi_i(1) = -beta. "
        "pi_i itself is not defined here and is not used."
    )


__all__ = [
    "CheckResult",
    "DOWN",
    "FIXED",
    "UP",
    "check_gq_property",
    "check_type_a",
    "check_word",
    "hat_psi",
    "hat_psi_remark",
    "k_duals",
    "maya_action",
    "onerow_by_remark",
    "phatK_by_word",
    "pi_note",
    "psi",
    "raising_word",
    "raising_word_a",
    "reflect_supersymmetric",
    "root_element",
    "shatK_by_word",
    "simple_reflection_b",
    "twisted_hat_psi",
    "twisted_reflection_factory",
    "type_d_report",
    "verify_recursion",
    "weyl_action_sp",
]
