"""Special functions used to build the oscillator partner family.

Everything here is written for the narrow parameter ranges the rest of the
package needs: Kummer's function with positive ``a`` and ``c`` on a
non-negative argument, Hermite-type polynomials of modest order, and gamma
function ratios. Quantities that grow like ``exp(x**2)`` are carried as
:class:`ScaledReal` (sign plus natural-log magnitude) so nothing overflows
even far out on the grid.
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "ConvergenceError",
    "ScaledReal",
    "KummerArgs",
    "log_gamma",
    "kummer_m",
    "kummer_m_deriv",
    "kummer_m_highprec",
    "kummer_transform_check",
    "kummer_asymptotic",
    "hermite_poly",
    "pseudo_hermite",
    "s_max",
]

MAX_TERMS = 2000
REL_STOP = 1e-17

# Rescale running sums once they pass this, keeping headroom below DBL_MAX.
_RESCALE_AT = 1e250
_LOG_RESCALE = math.log(_RESCALE_AT)


class ConvergenceError(RuntimeError):
    """A series did not reach its stopping criterion within the term cap."""


@dataclass(frozen=True)
class ScaledReal:
    """A real number stored as ``sign * exp(log_abs)``.

    Both fields may be numpy arrays of a common shape, in which case every
    operation acts elementwise. Zero is ``sign == 0`` with ``log_abs == -inf``.
    """

    sign: float | np.ndarray
    log_abs: float | np.ndarray

    @classmethod
    def from_value(cls, value) -> "ScaledReal":
        v = np.asarray(value, dtype=float)
        sign = np.sign(v)
        with np.errstate(divide="ignore"):
            log_abs = np.log(np.abs(v))
        if v.ndim == 0:
            return cls(float(sign), float(log_abs))
        return cls(sign, log_abs)

    def value(self):
        """Convert back to a plain float (or array); may overflow to inf."""
        with np.errstate(over="ignore"):
            out = np.where(self.sign == 0, 0.0, self.sign * np.exp(self.log_abs))
        return float(out) if np.ndim(out) == 0 else out

    __float__ = value

    def __neg__(self) -> "ScaledReal":
        return ScaledReal(-self.sign, self.log_abs)

    def __mul__(self, other) -> "ScaledReal":
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_value(other)
        return ScaledReal(self.sign * other.sign, self.log_abs + other.log_abs)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScaledReal":
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_value(other)
        if np.any(other.sign == 0):
            raise ZeroDivisionError("division by a zero ScaledReal")
        return ScaledReal(self.sign * other.sign, self.log_abs - other.log_abs)

    def __add__(self, other) -> "ScaledReal":
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_value(other)
        la = np.where(self.sign == 0, -np.inf, self.log_abs)
        lb = np.where(other.sign == 0, -np.inf, other.log_abs)
        top = np.maximum(la, lb)
        finite_top = np.where(np.isfinite(top), top, 0.0)
        with np.errstate(invalid="ignore", over="ignore"):
            total = self.sign * np.exp(la - finite_top) + other.sign * np.exp(lb - finite_top)
        sign = np.sign(total)
        with np.errstate(divide="ignore"):
            log_abs = np.where(sign == 0, -np.inf, finite_top + np.log(np.abs(total)))
        if np.ndim(sign) == 0:
            return ScaledReal(float(sign), float(log_abs))
        return ScaledReal(sign, log_abs)

    __radd__ = __add__

    def __sub__(self, other) -> "ScaledReal":
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_value(other)
        return self + (-other)

    def __rsub__(self, other) -> "ScaledReal":
        return (-self) + other

    def scale_exp(self, exponent) -> "ScaledReal":
        """Multiply by ``exp(exponent)`` without ever forming it."""
        return ScaledReal(self.sign, self.log_abs + exponent)


class KummerArgs(NamedTuple):
    """Arguments ``(a, c, z)`` of Kummer's function ``M(a, c; z)``."""

    a: float
    c: float
    z: float

    def validate(self) -> "KummerArgs":
        a, c, z = self
        if c <= 0 and float(c).is_integer():
            raise ValueError(f"c={c} is a pole of Kummer's function")
        if not (a > 0 and c > 0):
            raise ValueError(f"kummer_m needs a > 0 and c > 0, got a={a}, c={c}")
        if np.any(np.asarray(z) < 0):
            raise ValueError("kummer_m needs z >= 0; use kummer_m_highprec for signed series")
        return self


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _kummer_scalar(a: float, c: float, z: float, max_terms: int) -> ScaledReal:
    term = 1.0
    total = 1.0
    shift = 0.0
    for n in range(max_terms):
        term *= (a + n) / (c + n) * z / (n + 1)
        total += term
        if total > _RESCALE_AT:
            total /= _RESCALE_AT
            term /= _RESCALE_AT
            shift += _LOG_RESCALE
        if term <= REL_STOP * total:
            return ScaledReal(1.0, math.log(total) + shift)
    raise ConvergenceError(f"M({a}, {c}; {z}) did not converge in {max_terms} terms")


def _kummer_array(a: float, c: float, z: np.ndarray, max_terms: int) -> ScaledReal:
    term = np.ones_like(z)
    total = np.ones_like(z)
    shift = np.zeros_like(z)
    for n in range(max_terms):
        term *= (a + n) / (c + n) * z / (n + 1)
        total += term
        big = total > _RESCALE_AT
        if big.any():
            total[big] /= _RESCALE_AT
            term[big] /= _RESCALE_AT
            shift[big] += _LOG_RESCALE
        if np.all(term <= REL_STOP * total):
            return ScaledReal(np.ones_like(z), np.log(total) + shift)
    raise ConvergenceError(f"M({a}, {c}; z) did not converge in {max_terms} terms")


def kummer_m(a: float, c: float, z, *, max_terms: int = MAX_TERMS) -> ScaledReal:
    """Kummer's confluent hypergeometric function ``M(a, c; z)``.

    Summed directly from the power series with periodic rescaling, so the
    result is exact to a few ulps for any ``z`` the term cap allows
    (``z`` up to several hundred). ``z`` may be an array.

    Raises
    ------
    ValueError
        Outside ``a > 0``, ``c > 0``, ``z >= 0``, where every term is
        positive and the plain series is safe.
    ConvergenceError
        If ``max_terms`` is exhausted.
    """
    KummerArgs(a, c, z).validate()
    if np.ndim(z) == 0:
        return _kummer_scalar(float(a), float(c), float(z), max_terms)
    return _kummer_array(float(a), float(c), np.array(z, dtype=float), max_terms)


def kummer_m_deriv(a: float, c: float, z, *, max_terms: int = MAX_TERMS) -> ScaledReal:
    """``dM(a, c; z)/dz = (a/c) M(a+1, c+1; z)``."""
    KummerArgs(a, c, z).validate()
    return kummer_m(a + 1, c + 1, z, max_terms=max_terms).scale_exp(math.log(a / c))


def kummer_m_highprec(a: float, c: float, z: float, *, digits: int = 80,
                      max_terms: int = MAX_TERMS) -> decimal.Decimal:
    """Series for ``M(a, c; z)`` summed in ``digits``-digit decimal arithmetic.

    Works for any sign pattern of the terms, in particular the alternating
    series at negative ``z`` where double precision loses everything to
    cancellation. Inputs are converted exactly from their binary values.
    """
    if c <= 0 and float(c).is_integer():
        raise ValueError(f"c={c} is a pole of Kummer's function")
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        da, dc, dz = decimal.Decimal(a), decimal.Decimal(c), decimal.Decimal(z)
        stop = decimal.Decimal(10) ** (-(digits // 2))
        # past this index the term ratio is below ~1/2 in magnitude
        settle = 2 * abs(z) + abs(a) + 10
        term = decimal.Decimal(1)
        total = decimal.Decimal(1)
        for n in range(max_terms):
            term = term * (da + n) / (dc + n) * dz / (n + 1)
            total += term
            if term == 0 or (n > settle and abs(term) <= stop * abs(total)):
                return +total
    raise ConvergenceError(f"M({a}, {c}; {z}) did not converge in {max_terms} terms")


def kummer_transform_check(a: float, c: float, z: float) -> float:
    """Relative residual of ``M(a, c; -z) = exp(-z) M(c-a, c; z)``.

    The left side is an alternating series, so it is summed in extended
    decimal precision. The right side uses :func:`kummer_m` when ``c - a``
    is positive and the extended-precision series otherwise.
    """
    lhs = float(kummer_m_highprec(a, c, -z))
    if c - a > 0:
        rhs = kummer_m(c - a, c, z).scale_exp(-z).value()
    else:
        with decimal.localcontext() as ctx:
            ctx.prec = 80
            rhs = float(kummer_m_highprec(c - a, c, z) * decimal.Decimal(-z).exp())
    return abs(lhs - rhs) / abs(rhs)


def kummer_asymptotic(a: float, c: float, z: float) -> float:
    """Leading large-``|z|`` behaviour of ``M(a, c; z)``.

    For ``z > 0`` this is ``Gamma(c)/Gamma(a) e^z z^(a-c)``; for ``z < 0`` it
    is ``Gamma(c)/Gamma(c-a) (-z)^(-a)``. Diagnostic only; never used to
    evaluate ``M``.
    """
    if z > 0:
        return math.exp(log_gamma(c) - log_gamma(a) + z + (a - c) * math.log(z))
    if z < 0:
        return math.gamma(c) / math.gamma(c - a) * (-z) ** (-a)
    raise ValueError("asymptotic form is meaningless at z = 0")


def hermite_poly(k: int, x):
    """Physicists' Hermite polynomial ``H_k(x)`` by three-term recurrence.

    Values overflow double precision beyond ``k`` of a few hundred; the
    package only uses ``k <= 30``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    x = np.asarray(x, dtype=float)
    prev, cur = np.zeros_like(x), np.ones_like(x)
    for j in range(k):
        prev, cur = cur, 2 * x * cur - 2 * j * prev
    return float(cur) if cur.ndim == 0 else cur


def pseudo_hermite(p: int, x):
    """Pseudo-Hermite polynomial ``(-i)^p H_p(ix) = e^{-x^2} d^p/dx^p e^{x^2}``.

    Same recurrence as :func:`hermite_poly` with the sign of the second
    term flipped, so every coefficient is non-negative.
    """
    if p < 0 or int(p) != p:
        raise ValueError("p must be a non-negative integer")
    x = np.asarray(x, dtype=float)
    prev, cur = np.zeros_like(x), np.ones_like(x)
    for j in range(int(p)):
        prev, cur = cur, 2 * x * cur + 2 * j * prev
    return float(cur) if cur.ndim == 0 else cur


def s_max(p: float) -> float:
    """Largest skew ``2 Gamma(p/2 + 1) / Gamma((p + 1)/2)`` keeping the seed nodeless."""
    if not p > -1:
        raise ValueError(f"p must exceed -1, got {p}")
    return 2.0 * math.exp(log_gamma(p / 2 + 1) - log_gamma((p + 1) / 2))
