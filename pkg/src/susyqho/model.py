"""Supersymmetric partners of the harmonic oscillator ``-d^2/dx^2 + x^2``.

A nodeless solution of the oscillator equation at pseudo-energy
``-(2p + 1)`` is

    phi(x) = [M((p+1)/2, 1/2; x^2) + s x M(p/2 + 1, 3/2; x^2)] exp(-x^2/2)

and its logarithmic derivative ``W`` factorizes a partner Hamiltonian whose
potential, shifted to approach ``x^2`` at large ``|x|``, is
``V = 2 W^2 - x^2 - 4p``. The partner has the oscillator ladder ``2k + 3``
(``k >= 0``) plus a ground level ``1 - 2p`` whose wavefunction is
``1/phi``.

All energies are in units of ``hbar*omega/2`` and lengths in oscillator
units. Every function accepts a scalar or an array for ``x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import ScaledReal, hermite_poly, kummer_m, log_gamma, s_max

__all__ = [
    "PartnerParams",
    "Eigenstate",
    "seed_solution",
    "seed_derivative",
    "superpotential",
    "w_func",
    "partner_potential",
    "energy",
    "excited_norm_constant",
    "eigenstate_excited",
    "eigenstate_ground",
    "eigenstate",
    "eigenstates",
    "normalization_integral",
    "oscillator_state",
]


@dataclass(frozen=True)
class PartnerParams:
    """Coordinates ``(p, s_hat)`` of one member of the partner family.

    ``s_hat`` is the skew rescaled by its maximum, so the valid box is
    ``p > -1`` and ``|s_hat| < 1`` regardless of ``p``.
    """

    p: float
    s_hat: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p > -1):
            raise ValueError(f"p must satisfy p > -1, got p={self.p}")
        if not (math.isfinite(self.s_hat) and abs(self.s_hat) < 1):
            raise ValueError(f"s_hat must satisfy |s_hat| < 1, got s_hat={self.s_hat}")

    @classmethod
    def from_raw(cls, p: float, s: float) -> "PartnerParams":
        return cls(p, s / s_max(p))

    @property
    def s_max(self) -> float:
        return s_max(self.p)

    @property
    def s_raw(self) -> float:
        return self.s_hat * self.s_max

    @property
    def seed_energy(self) -> float:
        """Pseudo-energy ``lambda = -(2p + 1)`` of the seed solution."""
        return -(2 * self.p + 1)


def _seed_parts(params: PartnerParams, x):
    """``u = phi * exp(x^2/2)`` and ``du/dx``, both as ScaledReal."""
    p, s = params.p, params.s_raw
    x = np.asarray(x, dtype=float)
    z = x * x
    even = kummer_m((p + 1) / 2, 0.5, z)
    # d/dz M((p+1)/2, 1/2; z) = (p+1) M((p+3)/2, 3/2; z)
    even_dz = kummer_m((p + 3) / 2, 1.5, z) * (p + 1)
    u = even
    du = even_dz * (2 * x)
    if s != 0.0:
        odd = kummer_m(p / 2 + 1, 1.5, z)
        odd_dz = kummer_m(p / 2 + 2, 2.5, z) * ((p + 2) / 3)
        u = u + odd * (s * x)
        du = du + (odd + odd_dz * (2 * z)) * s
    return u, du


def seed_solution(params: PartnerParams, x) -> ScaledReal:
    """Nodeless seed ``phi_{p,s}(x)``; always has sign +1 in the valid range."""
    u, _ = _seed_parts(params, x)
    return u.scale_exp(-0.5 * np.square(x))


def seed_derivative(params: PartnerParams, x) -> ScaledReal:
    """``d phi_{p,s}/dx`` from term-wise differentiation of the series."""
    u, du = _seed_parts(params, x)
    return (du - u * np.asarray(x, dtype=float)).scale_exp(-0.5 * np.square(x))


def w_func(params: PartnerParams, x):
    """Log-derivative of ``phi * exp(x^2/2)``; equals ``W(x) + x``."""
    u, du = _seed_parts(params, x)
    return (du / u).value()


def superpotential(params: PartnerParams, x):
    """``W = phi'/phi``. Grows like ``x + p/x`` at large ``|x|``."""
    return w_func(params, x) - np.asarray(x, dtype=float)


def partner_potential(params: PartnerParams, x):
    """``V_{p,s}(x) = 2 W^2 - x^2 - 4p``; tends to ``x^2`` far from the origin."""
    x = np.asarray(x, dtype=float)
    big_w = superpotential(params, x)
    out = 2 * big_w * big_w - x * x - 4 * params.p
    return float(out) if np.ndim(out) == 0 else out


def energy(k: int, params: PartnerParams) -> float:
    if k < -1:
        raise IndexError(f"level index must be >= -1, got {k}")
    if k == -1:
        return 1 - 2 * params.p
    return 2 * k + 3.0


def normalization_integral(params: PartnerParams) -> float:
    """Closed form of ``integral dx / phi_{p,s}(x)^2`` over the real line.

    ``sqrt(pi) Gamma(p+1) / (2^p [Gamma(p/2+1)^2 - (s^2/4) Gamma((p+1)/2)^2])``,
    which equals ``I_{p,0} / (1 - s_hat^2)``.
    """
    p = params.p
    log_even = (0.5 * math.log(math.pi) + log_gamma(p + 1) - p * math.log(2)
                - 2 * log_gamma(p / 2 + 1))
    return math.exp(log_even) / (1 - params.s_hat ** 2)


def excited_norm_constant(k: int, p: float) -> float:
    """``[2^{k+1} k! (k+p+1) sqrt(pi)]^{-1/2}``."""
    log_n = ((k + 1) * math.log(2) + math.lgamma(k + 1) + math.log(k + p + 1)
             + 0.5 * math.log(math.pi))
    return math.exp(-0.5 * log_n)


def _hermite_pair(k: int, x):
    h_k = hermite_poly(k, x)
    h_km1 = hermite_poly(k - 1, x) if k > 0 else np.zeros_like(np.asarray(x, dtype=float))
    return h_k, h_km1


def eigenstate_excited(k: int, params: PartnerParams, x):
    """Normalized excited state ``psi_k``, ``k >= 0``, with energy ``2k + 3``.

    Obtained by applying ``-d/dx + W`` to the oscillator state ``n = k``.
    """
    if k < 0:
        raise IndexError("excited states have k >= 0")
    x = np.asarray(x, dtype=float)
    h_k, h_km1 = _hermite_pair(k, x)
    out = (excited_norm_constant(k, params.p) * (w_func(params, x) * h_k - 2 * k * h_km1)
           * np.exp(-0.5 * x * x))
    return float(out) if out.ndim == 0 else out


def eigenstate_ground(params: PartnerParams, x):
    """Normalized ground state ``I^{-1/2} / phi``, energy ``1 - 2p``."""
    phi = seed_solution(params, x)
    inv = ScaledReal(phi.sign, -phi.log_abs - 0.5 * math.log(normalization_integral(params)))
    return inv.value()


def eigenstate(k: int, params: PartnerParams, x):
    if k == -1:
        return eigenstate_ground(params, x)
    return eigenstate_excited(k, params, x)


@dataclass(frozen=True)
class Eigenstate:
    """One bound state of the partner potential, callable on ``x``."""

    k: int
    params: PartnerParams
    energy: float = field(init=False)
    norm_constant: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "energy", energy(self.k, self.params))
        if self.k == -1:
            c = normalization_integral(self.params) ** -0.5
        else:
            c = excited_norm_constant(self.k, self.params.p)
        object.__setattr__(self, "norm_constant", c)

    def __call__(self, x):
        return eigenstate(self.k, self.params, x)


def eigenstates(params: PartnerParams, levels: int) -> list[Eigenstate]:
    """The lowest ``levels`` states, ground state first."""
    return [Eigenstate(k, params) for k in range(-1, levels - 1)]


def oscillator_state(n: int, x):
    """Textbook oscillator eigenfunction ``psi_n`` (energy ``2n + 1``)."""
    x = np.asarray(x, dtype=float)
    c = math.exp(-0.5 * (n * math.log(2) + math.lgamma(n + 1) + 0.5 * math.log(math.pi)))
    out = c * hermite_poly(n, x) * np.exp(-0.5 * x * x)
    return float(out) if out.ndim == 0 else out
