"""Exact truncated multivariate series over the rationals.

Every series lives in ``Q[coeff][[x, y, b]]`` modulo terms of geometric degree
greater than its ``cutoff``.  Geometric variables (families X, Y, B) have
degree one; provider coefficients (family COEFF, e.g. ``beta`` or ``m1``) have
degree zero, so truncation is driven by the geometric variables only.

Arithmetic between series of different cutoffs propagates precision
honestly: a sum is known to the smaller cutoff, a product to
``min(Da + val(b), Db + val(a))`` (capped at the larger operand cutoff).  The
module-level :func:`add` and :func:`mul_truncated` are the strict variants
that refuse mismatched cutoffs.
"""

from __future__ import annotations

import heapq
import json
import re
import threading
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from numbers import Rational
from typing import Mapping, Sequence

from gmpy2 import mpq

from fglschur._kernels import add_terms, mul_terms, truncate_terms

DEFAULT_CUTOFF = 6
MAX_CUTOFF = 12
_FIELD = 8
_DEG = 0x7F


class SeriesError(Exception):
    """Base class for series-core failures."""


class CutoffMismatchError(SeriesError, ValueError):
    """Operands were built at different cutoffs (configuration error)."""


class CutoffTooLargeError(SeriesError, ValueError):
    pass


class DivergenceError(SeriesError, ArithmeticError):
    pass


class NotInvertibleError(SeriesError, ArithmeticError):
    pass


class DivisibilityError(SeriesError, ArithmeticError):
    """An exact division left a nonzero remainder.

    ``witness`` is the first monomial (as text) that could not be reduced.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PrecisionExhaustedError(DivisibilityError):
    """The divisor's valuation leaves no degree of the quotient determined."""


class TriangularSolveError(SeriesError, ArithmeticError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class Family(IntEnum):
    X = 0
    Y = 1
    B = 2
    COEFF = 3


_NAME_RE = re.compile(r"^(x|y|b|m)(-?\d+)$")


@dataclass(frozen=True, order=True)
class Variable:
    family: Family
    index: int

    def __post_init__(self):
        if self.family in (Family.X, Family.Y) and self.index < 1:
            raise ValueError(f"{self.family.name} variables are indexed from 1")
        if self.family == Family.COEFF and self.index < 0:
            raise ValueError("coefficient variables have index >= 0")

    @property
    def geometric(self) -> bool:
        return self.family != Family.COEFF

    @property
    def name(self) -> str:
        if self.family == Family.COEFF:
            return "beta" if self.index == 0 else f"m{self.index}"
        return "xybc"[self.family] + str(self.index)

    def __str__(self):
        return self.name

    @classmethod
    def parse(cls, text: str) -> "Variable":
        if text == "beta":
            return cls(Family.COEFF, 0)
        mt = _NAME_RE.match(text)
        if not mt:
            raise ValueError(f"not a variable name: {text!r}")
        fam = {"x": Family.X, "y": Family.Y, "b": Family.B, "m": Family.COEFF}[mt.group(1)]
        return cls(fam, int(mt.group(2)))


def x(i: int) -> Variable:
    return Variable(Family.X, i)


def y(i: int) -> Variable:
    return Variable(Family.Y, i)


def b(i: int) -> Variable:
    return Variable(Family.B, i)


def m(k: int) -> Variable:
    return Variable(Family.COEFF, k)


BETA = Variable(Family.COEFF, 0)


class _Registry:
    """Interns variables into byte slots of the packed monomial encoding.

    Slots are only ever appended, so an encoding never changes meaning.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self.variables: list[Variable] = []
        self.slots: dict[Variable, int] = {}
        self.guard = 0x80

    def slot(self, v: Variable) -> int:
        s = self.slots.get(v)
        if s is None:
            with self._lock:
                s = self.slots.get(v)
                if s is None:
                    self.variables.append(v)
                    s = len(self.variables)
                    self.slots[v] = s
                    self.guard |= 0x80 << (_FIELD * s)
        return s


_REG = _Registry()


def slot_of(v: Variable) -> int:
    return _REG.slot(v)


def shift_of(v: Variable) -> int:
    return _FIELD * _REG.slot(v)


def encode(exps: Mapping[Variable, int]) -> int:
    mono = 0
    deg = 0
    for v, e in exps.items():
        if e < 0:
            raise ValueError("negative exponent")
        if e == 0:
            continue
        if e > _DEG:
            raise OverflowError(f"exponent {e} of {v} exceeds packed range")
        mono += e << (_FIELD * _REG.slot(v))
        if v.family != Family.COEFF:
            deg += e
    if deg > _DEG:
        raise OverflowError("degree exceeds packed range")
    return mono + deg


@lru_cache(maxsize=1 << 16)
def decode(mono: int) -> tuple[tuple[Variable, int], ...]:
    """Packed monomial -> sorted ``((variable, exponent), ...)``."""
    out = []
    mono >>= _FIELD
    s = 1
    variables = _REG.variables
    while mono:
        e = mono & 0xFF
        if e:
            out.append((variables[s - 1], e))
        mono >>= _FIELD
        s += 1
    out.sort()
    return tuple(out)


def _mono_str(mono: int) -> str:
    parts = []
    for v, e in decode(mono):
        parts.append(v.name if e == 1 else f"{v.name}^{e}")
    return "*".join(parts)


def _canon_key(mono: int):
    return (mono & _DEG, decode(mono))


def _as_mpq(c) -> mpq:
    if isinstance(c, mpq):
        return c
    if isinstance(c, (int, Rational)):
        return mpq(c)
    if isinstance(c, str):
        return mpq(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


def check_cutoff(cutoff: int, allow_large: bool = False) -> int:
    if not isinstance(cutoff, int) or cutoff < 0:
        raise ValueError("cutoff must be a non-negative integer")
    if cutoff > MAX_CUTOFF and not allow_large:
        raise CutoffTooLargeError(
            f"cutoff {cutoff} exceeds {MAX_CUTOFF}; pass allow_large=True to override"
        )
    if cutoff > 60:
        raise CutoffTooLargeError("cutoff above 60 is outside the packed encoding")
    return cutoff


class TruncatedSeries:
    """Immutable sparse series with rational coefficients, truncated by degree."""

    __slots__ = ("_terms", "_cutoff")

    def __init__(self, terms=(), cutoff: int = DEFAULT_CUTOFF, *, allow_large: bool = False):
        check_cutoff(cutoff, allow_large)
        raw: dict[int, mpq] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, c in items:
            if isinstance(mono, Variable):
                mono = {mono: 1}
            key = encode(dict(mono))
            if (key & _DEG) > cutoff:
                continue
            raw[key] = raw.get(key, 0) + _as_mpq(c)
        self._terms = {k: c for k, c in raw.items() if c}
        self._cutoff = cutoff

    @classmethod
    def _make(cls, terms: dict, cutoff: int) -> "TruncatedSeries":
        obj = object.__new__(cls)
        obj._terms = terms
        obj._cutoff = cutoff
        return obj

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, cutoff: int = DEFAULT_CUTOFF) -> "TruncatedSeries":
        return cls._make({}, check_cutoff(cutoff, True))

    @classmethod
    def constant(cls, c, cutoff: int = DEFAULT_CUTOFF) -> "TruncatedSeries":
        c = _as_mpq(c)
        return cls._make({0: c} if c else {}, check_cutoff(cutoff, True))

    @classmethod
    def one(cls, cutoff: int = DEFAULT_CUTOFF) -> "TruncatedSeries":
        return cls.constant(1, cutoff)

    @classmethod
    def var(cls, v: Variable, cutoff: int = DEFAULT_CUTOFF) -> "TruncatedSeries":
        mono = encode({v: 1})
        terms = {mono: mpq(1)} if (mono & _DEG) <= cutoff else {}
        return cls._make(terms, check_cutoff(cutoff, True))

    @classmethod
    def monomial(cls, exps: Mapping[Variable, int], coeff=1, cutoff: int = DEFAULT_CUTOFF):
        mono = encode(exps)
        c = _as_mpq(coeff)
        terms = {mono: c} if c and (mono & _DEG) <= cutoff else {}
        return cls._make(terms, check_cutoff(cutoff, True))

    # basic accessors --------------------------------------------------------
    @property
    def cutoff(self) -> int:
        return self._cutoff

    @property
    def raw_terms(self) -> dict:
        """Packed term dict; treat as read-only."""
        return self._terms

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def valuation(self) -> int:
        """Lowest geometric degree present (``cutoff + 1`` for zero)."""
        if not self._terms:
            return self._cutoff + 1
        return min(k & _DEG for k in self._terms)

    def degree(self) -> int:
        """Highest geometric degree present (-1 for zero)."""
        if not self._terms:
            return -1
        return max(k & _DEG for k in self._terms)

    def constant_term(self) -> mpq:
        return self._terms.get(0, mpq(0))

    def coefficient(self, exps: Mapping[Variable, int]) -> mpq:
        return self._terms.get(encode(exps), mpq(0))

    def terms(self) -> list[tuple[dict[Variable, int], mpq]]:
        """Canonically ordered ``(exponents, coefficient)`` pairs."""
        keys = sorted(self._terms, key=_canon_key)
        return [(dict(decode(k)), self._terms[k]) for k in keys]

    def variables(self) -> set[Variable]:
        out = set()
        for k in self._terms:
            out.update(v for v, _ in decode(k))
        return out

    def homogeneous(self, d: int) -> "TruncatedSeries":
        return TruncatedSeries._make(
            {k: c for k, c in self._terms.items() if (k & _DEG) == d}, self._cutoff
        )

    def truncate(self, cutoff: int) -> "TruncatedSeries":
        if cutoff > self._cutoff:
            raise ValueError(f"cannot raise precision from {self._cutoff} to {cutoff}")
        if cutoff == self._cutoff:
            return self
        return TruncatedSeries._make(truncate_terms(self._terms, cutoff), cutoff)

    def _lift(self, cutoff: int) -> "TruncatedSeries":
        # relabel an exactly known polynomial at a higher cutoff
        return TruncatedSeries._make(self._terms, cutoff)

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self._cutoff)

    def __neg__(self):
        return TruncatedSeries._make({k: -c for k, c in self._terms.items()}, self._cutoff)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            try:
                other = TruncatedSeries.constant(other, self._cutoff)
            except TypeError:
                return NotImplemented
        d = min(self._cutoff, other._cutoff)
        a = self._terms if d == self._cutoff else truncate_terms(self._terms, d)
        bb = other._terms if d == other._cutoff else truncate_terms(other._terms, d)
        return TruncatedSeries._make(add_terms(a, bb, 1), d)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            try:
                other = TruncatedSeries.constant(other, self._cutoff)
            except TypeError:
                return NotImplemented
        d = min(self._cutoff, other._cutoff)
        a = self._terms if d == self._cutoff else truncate_terms(self._terms, d)
        bb = other._terms if d == other._cutoff else truncate_terms(other._terms, d)
        return TruncatedSeries._make(add_terms(a, bb, -1), d)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        c = _as_mpq(c)
        if not c:
            return TruncatedSeries._make({}, self._cutoff)
        return TruncatedSeries._make({k: v * c for k, v in self._terms.items()}, self._cutoff)

    def product_cutoff(self, other: "TruncatedSeries") -> int:
        d = min(self._cutoff + other.valuation(), other._cutoff + self.valuation())
        return min(d, max(self._cutoff, other._cutoff))

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        d = self.product_cutoff(other)
        return TruncatedSeries._make(mul_terms(self._terms, other._terms, d, _REG.guard), d)

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return exact_divide(self, other)
        return self.scale(1 / _as_mpq(other))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = TruncatedSeries.one(self._cutoff)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            try:
                other = TruncatedSeries.constant(other, self._cutoff)
            except TypeError:
                return NotImplemented
        d = min(self._cutoff, other._cutoff)
        a = self._terms if d == self._cutoff else truncate_terms(self._terms, d)
        bb = other._terms if d == other._cutoff else truncate_terms(other._terms, d)
        return a == bb

    __hash__ = None

    # structural maps --------------------------------------------------------
    def rename(self, mapping: Mapping[Variable, Variable]) -> "TruncatedSeries":
        """Substitute variables by variables (cheap, exact)."""
        shifts = {shift_of(v): shift_of(w) for v, w in mapping.items()}
        out: dict[int, mpq] = {}
        for k, c in self._terms.items():
            new = k
            for s_from, s_to in shifts.items():
                e = (k >> s_from) & 0xFF
                if e:
                    new -= e << s_from
            for s_from, s_to in shifts.items():
                e = (k >> s_from) & 0xFF
                if e:
                    new += e << s_to
            out[new] = out.get(new, 0) + c
        geo_change = any(v.geometric != w.geometric for v, w in mapping.items())
        if geo_change:
            fixed = {}
            for k, c in out.items():
                fixed[encode(dict(decode(k)))] = c
            out = {k: c for k, c in fixed.items() if (k & _DEG) <= self._cutoff}
        if _REG.guard and any(k & _REG.guard for k in out):
            raise OverflowError("exponent overflow in rename")
        return TruncatedSeries._make({k: c for k, c in out.items() if c}, self._cutoff)

    def split(self, variables: Sequence[Variable]) -> dict[tuple[int, ...], "TruncatedSeries"]:
        """Group terms by their exponents in ``variables``.

        Returns ``{exponent tuple: remaining series}``; the remaining series
        keep the full cutoff (their own degree is not shifted).
        """
        shifts = [shift_of(v) for v in variables]
        geo = [v.geometric for v in variables]
        groups: dict[tuple[int, ...], dict[int, mpq]] = {}
        for k, c in self._terms.items():
            exps = tuple((k >> s) & 0xFF for s in shifts)
            rest = k
            for s, e, g in zip(shifts, exps, geo):
                if e:
                    rest -= e << s
                    if g:
                        rest -= e
            groups.setdefault(exps, {})[rest] = c
        return {e: TruncatedSeries._make(t, self._cutoff) for e, t in groups.items()}

    def subs(self, bindings: Mapping[Variable, object]) -> "TruncatedSeries":
        return substitute(self, bindings)

    def map_coefficients(self, fn) -> "TruncatedSeries":
        out = {}
        for k, c in self._terms.items():
            v = _as_mpq(fn(c))
            if v:
                out[k] = v
        return TruncatedSeries._make(out, self._cutoff)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    # output -----------------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for k in sorted(self._terms, key=_canon_key):
            c = self._terms[k]
            body = _mono_str(k)
            neg = c < 0
            a = -c if neg else c
            if not body:
                txt = str(a)
            elif a == 1:
                txt = body
            else:
                txt = f"{a}*{body}"
            if not pieces:
                pieces.append(("-" if neg else "") + txt)
            else:
                pieces.append((" - " if neg else " + ") + txt)
        return "".join(pieces)

    def __repr__(self):
        return f"TruncatedSeries({self}, cutoff={self._cutoff})"

    def to_json_obj(self) -> dict:
        terms = []
        for k in sorted(self._terms, key=_canon_key):
            c = self._terms[k]
            terms.append(
                {
                    "monomial": {v.name: e for v, e in decode(k)},
                    "num": str(c.numerator),
                    "den": str(c.denominator),
                }
            )
        return {"cutoff": self._cutoff, "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj) -> "TruncatedSeries":
        cutoff = int(obj["cutoff"])
        items = [
            ({Variable.parse(n): int(e) for n, e in t["monomial"].items()}, mpq(int(t["num"]), int(t["den"])))
            for t in obj["terms"]
        ]
        return cls(items, cutoff, allow_large=True)

    @classmethod
    def from_json(cls, text: str) -> "TruncatedSeries":
        return cls.from_json_obj(json.loads(text))


def series(expr: str, cutoff: int = DEFAULT_CUTOFF) -> TruncatedSeries:
    """Parse a small polynomial such as ``"2*x1^2 - 3/2*b1*beta + 1"``."""
    text = expr.replace(" ", "")
    if not text:
        return TruncatedSeries.zero(cutoff)
    if text[0] not in "+-":
        text = "+" + text
    items = []
    for sign, body in re.findall(r"([+-])([^+-]+)", text):
        coeff = mpq(1)
        exps: dict[Variable, int] = {}
        for factor in body.split("*"):
            if re.fullmatch(r"\d+(/\d+)?", factor):
                coeff *= mpq(factor)
                continue
            name, _, e = factor.partition("^")
            v = Variable.parse(name)
            exps[v] = exps.get(v, 0) + (int(e) if e else 1)
        items.append((exps, -coeff if sign == "-" else coeff))
    return TruncatedSeries(items, cutoff, allow_large=True)


# --------------------------------------------------------------------------
# module-level operations


def _same_cutoff(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.cutoff != b.cutoff:
        raise CutoffMismatchError(f"cutoff mismatch: {a.cutoff} vs {b.cutoff}")


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _same_cutoff(a, b)
    return a + b


def mul_truncated(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _same_cutoff(a, b)
    return TruncatedSeries._make(mul_terms(a.raw_terms, b.raw_terms, a.cutoff, _REG.guard), a.cutoff)


def mul_full(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Product at the full precision the operands determine.

    ``a*b`` caps the result at ``max(a.cutoff, b.cutoff)``; here the cutoff is
    ``min(a.cutoff + val(b), b.cutoff + val(a))``, which lets factors carried
    at a fixed precision above their valuation multiply without losing terms.
    """
    d = min(a.cutoff + b.valuation(), b.cutoff + a.valuation())
    d = min(d, 60)
    return TruncatedSeries._make(mul_terms(a.raw_terms, b.raw_terms, d, _REG.guard), d)


def truncate(f: TruncatedSeries, cutoff: int) -> TruncatedSeries:
    return f.truncate(cutoff)


def substitute(f: TruncatedSeries, bindings: Mapping[Variable, object]) -> TruncatedSeries:
    """Simultaneous substitution ``v -> bindings[v]``, re-truncated.

    A geometric variable may only receive a value without constant term;
    otherwise the unknown tail of ``f`` would leak into every degree.
    """
    if not bindings:
        return f
    values: dict[Variable, TruncatedSeries] = {}
    cutoff = f.cutoff
    for v, val in bindings.items():
        if not isinstance(val, TruncatedSeries):
            val = TruncatedSeries.constant(val, f.cutoff)
        if v.geometric and val.valuation() == 0:
            raise DivergenceError(
                f"substituting a series with nonzero constant term for {v} does not converge"
            )
        values[v] = val
        cutoff = min(cutoff, val.cutoff)
    order = list(values)
    groups = f.truncate(cutoff).split(order)
    powers: dict[Variable, list[TruncatedSeries]] = {
        v: [TruncatedSeries.one(cutoff)] for v in order
    }

    for v in order:
        values[v] = values[v].truncate(cutoff)

    def power(v, e):
        lst = powers[v]
        while len(lst) <= e:
            lst.append(lst[-1] * values[v])
        return lst[e]

    acc: dict[int, mpq] = {}
    for exps, rest in groups.items():
        term = rest
        for v, e in zip(order, exps):
            if e:
                term = term * power(v, e)
                if term.is_zero():
                    break
        if term.cutoff < cutoff:
            cutoff = term.cutoff
        acc = add_terms(acc, term.raw_terms, 1)
    return TruncatedSeries._make(truncate_terms(acc, cutoff), cutoff)


def invert_unit(f: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a series with nonzero rational constant term."""
    low = {k: c for k, c in f.raw_terms.items() if (k & _DEG) == 0}
    if set(low) != {0}:
        raise NotInvertibleError(f"constant part is not a nonzero rational: {f.homogeneous(0)}")
    c0 = low[0]
    target = f.cutoff
    g = {0: 1 / c0}
    prec = 0
    guard = _REG.guard
    while prec < target:
        prec = min(2 * prec + 1, target)
        ft = truncate_terms(f.raw_terms, prec)
        fg = mul_terms(ft, g, prec, guard)
        # e = 1 - f*g has valuation > old precision
        e = add_terms({0: mpq(1)}, fg, -1)
        g = add_terms(g, mul_terms(g, e, prec, guard), 1)
    return TruncatedSeries._make(g, target)


def _divide_homogeneous(r: dict, g: dict, lead: int, guard: int) -> dict:
    """Exact division of polynomials by a single divisor (packed lex order)."""
    cg = g[lead]
    p = dict(r)
    heap = [-k for k in p]
    heapq.heapify(heap)
    q: dict[int, mpq] = {}
    gitems = list(g.items())
    while heap:
        lm = -heapq.heappop(heap)
        c = p.get(lm)
        if not c:
            continue
        if (((lm | guard) - lead) & guard) != guard:
            raise DivisibilityError(
                f"nonzero remainder at monomial {_mono_str(lm) or '1'}", _mono_str(lm) or "1"
            )
        t = lm - lead
        qc = c / cg
        q[t] = qc
        for mg, cc in gitems:
            key = t + mg
            old = p.get(key)
            if old is None:
                p[key] = -qc * cc
                heapq.heappush(heap, -key)
            else:
                p[key] = old - qc * cc
        p.pop(lm, None)
    return q


def exact_divide(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Quotient ``q`` with ``f = q*g``; raises :class:`DivisibilityError` otherwise.

    If ``g`` has valuation ``k`` the quotient is only determined through degree
    ``f.cutoff - k``, and that is the cutoff it carries.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero series")
    k = g.valuation()
    gk = {m: c for m, c in g.raw_terms.items() if (m & _DEG) == k}
    lead = max(gk)
    vf = f.valuation()
    out_cut = min(f.cutoff - k, g.cutoff + vf - 2 * k)
    if out_cut < 0:
        raise PrecisionExhaustedError("divisor valuation exceeds the available precision")
    guard = _REG.guard
    r = dict(f.raw_terms)
    q: dict[int, mpq] = {}
    gterms = g.raw_terms
    for d in range(vf, out_cut + k + 1):
        rd = {m: c for m, c in r.items() if (m & _DEG) == d}
        if not rd:
            continue
        qd = _divide_homogeneous(rd, gk, lead, guard)
        for m, c in qd.items():
            q[m] = q.get(m, 0) + c
        r = add_terms(r, mul_terms(qd, gterms, out_cut + k, guard), -1)
    # anything left below the verified range is a genuine remainder
    left = [m for m in r if (m & _DEG) <= out_cut + k]
    if left:
        w = min(left, key=_canon_key)
        raise DivisibilityError(f"nonzero remainder at {_mono_str(w) or '1'}", _mono_str(w) or "1")
    return TruncatedSeries._make({m: c for m, c in q.items() if c and (m & _DEG) <= out_cut}, out_cut)


# --------------------------------------------------------------------------
# triangular expansion


class _BasisVars:
    def __init__(self, variables: Sequence[Variable]):
        self.variables = list(variables)
        self.shifts = [shift_of(v) for v in self.variables]
        self.geo = [v.geometric for v in self.variables]

    def split(self, mono: int) -> tuple[tuple[int, ...], int, int]:
        exps = tuple((mono >> s) & 0xFF for s in self.shifts)
        part = 0
        deg = 0
        for s, e, g in zip(self.shifts, exps, self.geo):
            if e:
                part += e << s
                if g:
                    deg += e
        return exps, part + deg, deg

    def key(self, mono: int):
        exps, _, deg = self.split(mono)
        return (mono & _DEG, -deg, tuple(-e for e in exps))


def leading_term(f: TruncatedSeries, basis_vars: Sequence[Variable]):
    """Lowest term under (total degree, -degree in basis vars, lex-max exponents)."""
    bv = _BasisVars(basis_vars)
    best = min(f.raw_terms, key=bv.key)
    return best, f.raw_terms[best]


def triangular_expand(
    f: TruncatedSeries,
    basis: Sequence[tuple[object, TruncatedSeries]],
    basis_vars: Sequence[Variable],
) -> dict[object, TruncatedSeries]:
    """Solve ``f = sum_k c_k * basis_k`` with coefficients free of ``basis_vars``.

    Each basis element must have a unique leading term (see
    :func:`leading_term`) that is a pure monomial in ``basis_vars`` with a
    rational coefficient, and these leading monomials must be distinct.
    Reduction proceeds from the lowest total degree upward, so the factorial
    (b-dependent) corrections are absorbed automatically.  Coefficient ``c_k``
    is returned at cutoff ``f.cutoff - deg(lead_k)``.
    """
    bv = _BasisVars(basis_vars)
    leads: dict[int, tuple[object, TruncatedSeries, mpq]] = {}
    cutoff = f.cutoff
    lead_deg: dict[object, int] = {}
    for key, elem in basis:
        if elem.is_zero():
            raise TriangularSolveError(f"basis element {key!r} vanishes at this cutoff")
        lead = min(elem.raw_terms, key=bv.key)
        lk = bv.key(lead)
        if sum(1 for mono in elem.raw_terms if bv.key(mono) == lk) > 1:
            raise TriangularSolveError(f"basis element {key!r} has no unique leading term")
        _, part, _ = bv.split(lead)
        if part != lead:
            raise TriangularSolveError(
                f"leading term of basis element {key!r} carries non-basis factors"
            )
        if lead in leads:
            raise TriangularSolveError(
                f"basis elements {leads[lead][0]!r} and {key!r} share a leading term"
            )
        leads[lead] = (key, elem, elem.raw_terms[lead])
        lead_deg[key] = lead & _DEG
        cutoff = min(cutoff, elem.cutoff)
    guard = _REG.guard
    r = truncate_terms(f.raw_terms, cutoff)
    acc: dict[object, dict[int, mpq]] = {key: {} for key, _ in basis}
    while r:
        best = min(r, key=bv.key)
        exps, part, _ = bv.split(best)
        d = best & _DEG
        if part not in leads:
            raise TriangularSolveError(
                f"not in span: residual term {_mono_str(best)} has no matching basis element",
                _mono_str(best),
            )
        key, elem, lc = leads[part]
        chunk = {}
        for mono, c in r.items():
            if (mono & _DEG) == d and bv.split(mono)[1] == part:
                chunk[mono - part] = c / lc
        target = acc[key]
        for mono, c in chunk.items():
            target[mono] = target.get(mono, 0) + c
        r = add_terms(r, mul_terms(chunk, elem.raw_terms, cutoff, guard), -1)
    out = {}
    for key, _ in basis:
        cc = cutoff - lead_deg[key]
        if cc < 0:
            out[key] = TruncatedSeries._make({}, 0)
            continue
        out[key] = TruncatedSeries._make(
            {mono: c for mono, c in acc[key].items() if c and (mono & _DEG) <= cc}, cc
        )
    return out


def coefficient_of(
    f: TruncatedSeries, basis: Sequence[TruncatedSeries], t: Variable
) -> list[TruncatedSeries]:
    """Coefficients ``c_k`` (free of ``t``) with ``f = sum_k c_k * basis[k]``."""
    res = triangular_expand(f, list(enumerate(basis)), [t])
    return [res[k] for k in range(len(basis))]
