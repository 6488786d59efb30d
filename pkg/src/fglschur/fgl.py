"""Formal group law providers.

Three laws are available: the additive law ``u + v``, the multiplicative
(K-theory) law ``u + v + beta*u*v`` and the universal law over the rationals,
realised through its logarithm ``log t = t + sum_k m_k t^(k+1)`` with free
coefficient variables ``m_k``.  The coefficients ``a_ij`` are always read off
the computed law, never supplied.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Sequence

from gmpy2 import mpq

from fglschur.series import (
    BETA,
    DEFAULT_CUTOFF,
    DivergenceError,
    TruncatedSeries,
    Variable,
    invert_unit,
    m,
    substitute,
    x,
)

# dummy variables used for the stored one- and two-variable laws
_S = x(1)
_T = x(2)


_ALIASES = {"multiplicative": "k-theory", "k": "k-theory"}


class FGLKind(Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE_BETA = "k-theory"
    UNIVERSAL_RATIONAL = "universal"


@dataclass(frozen=True)
class FormalGroupLaw:
    """A one-dimensional commutative formal group law.

    ``beta`` only matters for the multiplicative law: ``None`` keeps it as the
    symbolic coefficient variable ``beta``, a rational substitutes a value.
    """

    kind: FGLKind
    beta: mpq | None = None

    @classmethod
    def additive(cls) -> "FormalGroupLaw":
        return cls(FGLKind.ADDITIVE)

    @classmethod
    def multiplicative(cls, beta=None) -> "FormalGroupLaw":
        return cls(FGLKind.MULTIPLICATIVE_BETA, None if beta is None else mpq(beta))

    @classmethod
    def universal(cls) -> "FormalGroupLaw":
        return cls(FGLKind.UNIVERSAL_RATIONAL)

    @classmethod
    def from_name(cls, name: str, beta: str | None = None) -> "FormalGroupLaw":
        kind = FGLKind(_ALIASES.get(name, name))
        if kind is FGLKind.MULTIPLICATIVE_BETA:
            if beta is None or beta == "symbolic":
                return cls.multiplicative()
            return cls.multiplicative(mpq(beta))
        return cls(kind)

    @property
    def label(self) -> str:
        if self.kind is FGLKind.MULTIPLICATIVE_BETA and self.beta is not None:
            return f"k-theory(beta={self.beta})"
        return self.kind.value

    @property
    def integral(self) -> bool:
        """Whether coefficients are integral, so 2-divisibility is meaningful."""
        if self.kind is FGLKind.UNIVERSAL_RATIONAL:
            return False
        return self.beta is None or self.beta.denominator == 1

    def beta_series(self, cutoff: int) -> TruncatedSeries:
        if self.beta is None:
            return TruncatedSeries.var(BETA, cutoff)
        return TruncatedSeries.constant(self.beta, cutoff)

    # universal law via logarithm -------------------------------------------
    @lru_cache(maxsize=None)
    def log_series(self, cutoff: int) -> TruncatedSeries:
        s = TruncatedSeries.var(_S, cutoff)
        out = s
        for k in range(1, cutoff):
            out = out + TruncatedSeries.var(m(k), cutoff) * s ** (k + 1)
        return out

    @lru_cache(maxsize=None)
    def exp_coefficients(self, cutoff: int) -> tuple[TruncatedSeries, ...]:
        """``e_k`` with ``exp(s) = s + sum_k e_k s^(k+1)``, compositional inverse of log."""
        s = TruncatedSeries.var(_S, cutoff)
        e = s
        log = self.log_series(cutoff)
        for _ in range(cutoff):
            e = s - (substitute(log, {_S: e}) - e)
        coeffs = []
        for k in range(1, cutoff):
            coeffs.append(_coeff_poly(e, {_S: k + 1}, cutoff))
        return tuple(coeffs)

    def _log(self, u: TruncatedSeries) -> TruncatedSeries:
        out = u
        power = u
        for k in range(1, u.cutoff):
            power = power * u
            if power.is_zero():
                break
            out = out + TruncatedSeries.var(m(k), u.cutoff) * power
        return out

    def _exp(self, s: TruncatedSeries) -> TruncatedSeries:
        coeffs = self.exp_coefficients(s.cutoff)
        acc = TruncatedSeries.zero(s.cutoff)
        # Horner: s*(1 + s*(e1 + s*(e2 + ...)))
        for c in reversed(coeffs):
            acc = (acc + c) * s
        return (acc + 1) * s

    # core operations ---------------------------------------------------------
    def formal_sum(self, u: TruncatedSeries, v: TruncatedSeries) -> TruncatedSeries:
        if u.constant_term() or v.constant_term() or u.valuation() == 0 or v.valuation() == 0:
            raise DivergenceError("formal sum needs arguments without constant term")
        if self.kind is FGLKind.ADDITIVE:
            return u + v
        if self.kind is FGLKind.MULTIPLICATIVE_BETA:
            d = min(u.cutoff, v.cutoff)
            return u + v + self.beta_series(d) * u * v
        return self._exp(self._log(u) + self._log(v))

    @lru_cache(maxsize=None)
    def inverse_series(self, cutoff: int) -> TruncatedSeries:
        """``chi(s)`` with ``F(s, chi(s)) = 0``, solved degree by degree."""
        s = TruncatedSeries.var(_S, cutoff)
        chi = -s
        for d in range(2, cutoff + 1):
            resid = self.formal_sum(s.truncate(d), chi.truncate(d))
            c = resid.split([_S]).get((d,))
            if c is not None:
                chi = chi - c.truncate(0)._lift(cutoff) * s**d
        return chi

    def formal_inverse(self, u: TruncatedSeries) -> TruncatedSeries:
        if u.valuation() == 0:
            raise DivergenceError("formal inverse needs an argument without constant term")
        if self.kind is FGLKind.ADDITIVE:
            return -u
        return substitute(self.inverse_series(u.cutoff), {_S: u})

    @lru_cache(maxsize=None)
    def bivariate(self, cutoff: int) -> TruncatedSeries:
        """``F(s, t)`` in the dummy variables ``x1, x2``."""
        return self.formal_sum(TruncatedSeries.var(_S, cutoff), TruncatedSeries.var(_T, cutoff))

    @lru_cache(maxsize=None)
    def bivariate_minus(self, cutoff: int) -> TruncatedSeries:
        """``F(s, chi(t))`` in ``x1, x2``."""
        t_bar = self.formal_inverse(TruncatedSeries.var(_T, cutoff))
        return self.formal_sum(TruncatedSeries.var(_S, cutoff), t_bar)

    def coefficient_aij(self, i: int, j: int, cutoff: int = DEFAULT_CUTOFF) -> TruncatedSeries:
        """Coefficient of ``u^i v^j`` in ``F(u, v)`` as a polynomial in coefficient variables."""
        if i < 0 or j < 0 or i + j > cutoff:
            raise ValueError(f"a_{{{i},{j}}} is out of range for cutoff {cutoff}")
        if i + j == 0:
            return TruncatedSeries.zero(cutoff)
        f2 = self.bivariate(max(i + j, 1))
        return _coeff_poly(f2, {_S: i, _T: j}, cutoff)

    # convenience -------------------------------------------------------------
    def add_vars(self, a: Variable, c: Variable, cutoff: int) -> TruncatedSeries:
        """``a +_F c`` for two variables (``a == c`` allowed)."""
        return self.bivariate(cutoff).rename({_S: a, _T: c})

    def sub_vars(self, a: Variable, c: Variable, cutoff: int) -> TruncatedSeries:
        """``a +_F (inverse of c)``."""
        return self.bivariate_minus(cutoff).rename({_S: a, _T: c})

    def bar(self, v: Variable, cutoff: int) -> TruncatedSeries:
        """Formal inverse of a single variable."""
        if self.kind is FGLKind.ADDITIVE:
            return -TruncatedSeries.var(v, cutoff)
        return self.inverse_series(cutoff).rename({_S: v})

    def __str__(self):
        return self.label


def _coeff_poly(f: TruncatedSeries, exps: dict[Variable, int], cutoff: int) -> TruncatedSeries:
    key = tuple(exps[v] for v in exps)
    part = f.split(list(exps)).get(key)
    if part is None:
        return TruncatedSeries.zero(cutoff)
    # only degree-0 (pure coefficient) terms belong to this coefficient
    return TruncatedSeries._make(dict(part.homogeneous(0).raw_terms), cutoff)


def factorial_power(
    p: FormalGroupLaw,
    t: Variable,
    b: Sequence[Variable] | None,
    k: int,
    doubled: bool,
    cutoff: int = DEFAULT_CUTOFF,
) -> TruncatedSeries:
    """``[t|b]^k = prod_{i<=k}(t +_F b_i)``, or ``[[t|b]]^k = (t +_F t)[t|b]^(k-1)``.

    ``b=None`` means all ``b_i = 0``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    out = TruncatedSeries.one(cutoff)
    if k == 0:
        return out
    tt = TruncatedSeries.var(t, cutoff)
    if doubled:
        out = p.add_vars(t, t, cutoff)
        k -= 1
    for i in range(k):
        if b is None:
            out = out * tt
        else:
            out = out * p.add_vars(t, b[i], cutoff)
    return out


ADDITIVE = FormalGroupLaw.additive()
K_THEORY = FormalGroupLaw.multiplicative()
UNIVERSAL = FormalGroupLaw.universal()

__all__ = [
    "ADDITIVE",
    "FGLKind",
    "FormalGroupLaw",
    "K_THEORY",
    "UNIVERSAL",
    "factorial_power",
    "invert_unit",
]
