"""Bose-Einstein condensation temperature of an ideal gas in the 1-D dimple trap.

The dimple trap with depth parameter ``p`` has levels ``(1 - 2p)`` and
``(2n + 1)`` for ``n >= 1`` in units of ``hbar*omega/2``, so level ``n`` sits
``(n + p) hbar*omega`` above the ground level. With the chemical potential
pinned to the ground level, the critical temperature is where the excited
levels hold all ``N`` atoms.

Inverse temperatures ``beta`` are the dimensionless ``hbar*omega/(k_B T)`` and
temperatures are returned in units of ``hbar*omega/k_B``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BracketError",
    "TrapSpec",
    "occupation_sum",
    "occupation_closedform",
    "critical_temperature",
    "tc_curve",
]

BETA_MIN = 1e-9
BETA_MAX = 50.0
_CHUNK = 1 << 20


class BracketError(ValueError):
    """The requested atom number cannot be reached inside the beta bracket."""


@dataclass(frozen=True)
class TrapSpec:
    n_atoms: int
    p: float = 0.0

    def __post_init__(self):
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 2:
            raise ValueError(f"n_atoms must be an integer >= 2, got {self.n_atoms}")
        if not (math.isfinite(self.p) and self.p >= 0):
            raise ValueError(f"the dimple needs p >= 0, got p={self.p}")


def occupation_sum(beta: float, p: float, *, max_terms: int = 10**9) -> float:
    """``sum_{n>=1} 1/(exp((n+p) beta) - 1)``, summed term by term.

    Stops once a chunk's last term drops below ``1e-16`` of the running
    total. Small ``beta`` needs roughly ``40/beta`` terms.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    if beta < BETA_MIN:
        raise OverflowError(f"beta={beta:g} is below {BETA_MIN:g}; the direct sum is out of range")
    if math.isinf(beta) or (1 + p) * beta > 745:
        return 0.0
    total = 0.0
    start = 1
    while start <= max_terms:
        n = np.arange(start, start + _CHUNK, dtype=float)
        with np.errstate(over="ignore"):
            terms = 1.0 / np.expm1((n + p) * beta)
        total += float(np.sum(terms))
        if terms[-1] < 1e-16 * total or terms[-1] == 0.0:
            return total
        start += _CHUNK
    raise OverflowError(f"sum needs more than {max_terms} terms at beta={beta:g}")


def occupation_closedform(beta: float, p: float) -> float:
    """Integral approximation ``(1/beta) ln[1/(1 - exp(-(p+1) beta))]``."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    a = (p + 1) * beta
    # expm1 keeps 1 - e^{-a} exact for small a, log1p keeps the log exact for large a
    if a < math.log(2):
        return -math.log(-math.expm1(-a)) / beta
    return -math.log1p(-math.exp(-a)) / beta


_METHODS = {"sum": occupation_sum, "closedform": occupation_closedform}


def critical_temperature(trap: TrapSpec, method: str = "closedform", *,
                         rtol: float = 1e-10) -> float:
    """Critical temperature ``k_B T_c / (hbar omega)``.

    Bisects in ``log(beta)`` over ``[1e-9, 50]``, so the relative root error
    is below ``rtol``; the occupation falls monotonically with ``beta`` and
    the bracket never loses the root.
    """
    try:
        occupation = _METHODS[method]
    except KeyError:
        raise ValueError(f"method must be one of {sorted(_METHODS)}, got {method!r}") from None
    n_target = float(trap.n_atoms)
    p = trap.p

    if occupation_closedform(BETA_MIN, p) < n_target:
        raise BracketError(f"N={trap.n_atoms} exceeds the occupation reachable at beta={BETA_MIN:g}")
    if occupation(BETA_MAX, p) > n_target:
        raise BracketError(f"N={trap.n_atoms} is below the occupation at beta={BETA_MAX:g}")

    lo, hi = BETA_MIN, BETA_MAX
    if method == "sum":
        # closedform <= sum <= closedform + first term, so the roots of the two
        # bounds bracket the root of the sum without summing at tiny beta
        lo = _bisect_log(lambda b: occupation_closedform(b, p), BETA_MIN, BETA_MAX, n_target, rtol)
        upper = lambda b: occupation_closedform(b, p) + 1.0 / math.expm1((p + 1) * b)
        hi = _bisect_log(upper, BETA_MIN, BETA_MAX, n_target, rtol)
    return 1.0 / _bisect_log(lambda b: occupation(b, p), lo, hi, n_target, rtol)


def _bisect_log(fn, lo: float, hi: float, target: float, rtol: float) -> float:
    """Root of the decreasing ``fn(beta) = target``, bisecting in ``log(beta)``."""
    lo, hi = math.log(lo), math.log(hi)
    while hi - lo > rtol:
        mid = 0.5 * (lo + hi)
        if fn(math.exp(mid)) > target:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))


def tc_curve(n_atoms: int, p_values, method: str = "closedform") -> list[tuple[float, float]]:
    """Rows ``(p, T_c(p) / T_c(0))`` for a sorted, non-negative list of ``p``."""
    p_values = [float(p) for p in p_values]
    if any(p < 0 for p in p_values) or p_values != sorted(p_values):
        raise ValueError("p_values must be non-negative and sorted")
    t0 = critical_temperature(TrapSpec(n_atoms, 0.0), method)
    return [(p, critical_temperature(TrapSpec(n_atoms, p), method) / t0) for p in p_values]
