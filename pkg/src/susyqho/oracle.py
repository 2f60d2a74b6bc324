"""Independent numerical checks for the closed-form partner family.

Nothing here trusts the analytic spectrum or normalization: eigenvalues come
from a finite-difference Hamiltonian diagonalized by Sturm-sequence
bisection, integrals from composite Simpson quadrature, and the Wronskian
identity behind the normalization integral is evaluated directly in
extended precision.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np
from scipy.integrate import simpson

from . import __version__
from .model import (
    PartnerParams,
    energy,
    eigenstate,
    normalization_integral,
    partner_potential,
    seed_solution,
)
from .specfun import s_max

__all__ = [
    "OracleError",
    "GridProblem",
    "SpectrumReport",
    "sturm_count",
    "tridiagonal_lowest",
    "inverse_iteration",
    "solve_lowest",
    "quadrature",
    "wronskian",
    "wronskian_check",
    "schrodinger_residual",
    "gram_matrix",
    "Check",
    "FamilyReport",
    "verify_family",
    "default_grid",
]

DEFAULT_L = 12.0
DEFAULT_N = 6000


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class GridProblem:
    """``-d^2/dx^2 + V`` on ``n_points`` interior nodes of ``[-L, L]``.

    Dirichlet walls sit at ``+-L``; the node spacing is ``2L/(n_points+1)``.
    """

    half_width: float
    n_points: int
    potential: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        if self.half_width <= 0 or self.n_points < 3:
            raise ValueError("need half_width > 0 and at least 3 points")

    @property
    def h(self) -> float:
        return 2 * self.half_width / (self.n_points + 1)

    @property
    def certified(self) -> bool:
        return self.half_width >= 8 and self.n_points >= 2000

    def nodes(self) -> np.ndarray:
        return -self.half_width + self.h * np.arange(1, self.n_points + 1)

    def refined(self) -> "GridProblem":
        return GridProblem(self.half_width, 2 * self.n_points, self.potential)

    def matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Diagonal and off-diagonal of the symmetric tridiagonal Hamiltonian."""
        inv_h2 = 1.0 / self.h ** 2
        diag = 2 * inv_h2 + np.asarray(self.potential(self.nodes()), dtype=float)
        off = np.full(self.n_points - 1, -inv_h2)
        return diag, off


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # shape (n_points, m), unit 2-norm columns
    residual_norms: np.ndarray
    nodes: np.ndarray
    raw_eigenvalues: np.ndarray  # base grid, before extrapolation
    h: float

    def wavefunction(self, j: int) -> np.ndarray:
        """Column ``j`` rescaled to unit L2 norm as a function of ``x``."""
        return self.eigenvectors[:, j] / math.sqrt(self.h)


def sturm_count(diag: np.ndarray, off_sq: np.ndarray, shifts) -> np.ndarray:
    """Number of eigenvalues below each shift (LDL^T pivot sign count)."""
    shifts = np.asarray(shifts, dtype=float)
    tiny = np.finfo(float).tiny ** 0.5
    q = diag[0] - shifts
    count = (q < 0).astype(np.int64)
    for i in range(1, diag.size):
        q = np.where(q == 0, tiny, q)
        q = (diag[i] - shifts) - off_sq[i - 1] / q
        count += q < 0
    return count


def tridiagonal_lowest(diag: np.ndarray, off: np.ndarray, m: int, *,
                       sections: int = 16) -> np.ndarray:
    """Lowest ``m`` eigenvalues by Sturm-sequence multisection.

    Every pass evaluates ``sections`` interior shifts per unresolved
    eigenvalue at once, shrinking each bracket by a factor ``sections + 1``.
    """
    off_sq = off * off
    radius = np.zeros_like(diag)
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    lo_all = float(np.min(diag - radius))
    hi_all = float(np.max(diag + radius))
    # pivots carry rounding of order eps * ||T||; brackets cannot usefully shrink further
    width = 8 * np.finfo(float).eps * max(abs(lo_all), abs(hi_all), 1.0)

    lo = np.full(m, lo_all)
    hi = np.full(m, hi_all)
    idx = np.arange(m)
    frac = np.arange(1, sections + 1) / (sections + 1)
    for _ in range(200):
        active = (hi - lo) > width
        if not active.any():
            break
        act = np.flatnonzero(active)
        grid = lo[act, None] + (hi[act] - lo[act])[:, None] * frac[None, :]
        counts = sturm_count(diag, off_sq, grid.ravel()).reshape(grid.shape)
        for row, j in enumerate(act):
            # count > j means eigenvalue j lies below that shift
            above = counts[row] > idx[j]
            k = int(np.argmax(above)) if above.any() else sections
            if k < sections:
                hi[j] = grid[row, k]
            if k > 0:
                lo[j] = grid[row, k - 1]
    return 0.5 * (lo + hi)


def _thomas(diag: np.ndarray, off: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve a symmetric tridiagonal system for each column of ``rhs``."""
    n = diag.shape[0]
    c = np.empty((n - 1,) + diag.shape[1:])
    d = np.empty_like(rhs)
    b = diag[0]
    c[0] = off[0] / b
    d[0] = rhs[0] / b
    for i in range(1, n):
        b = diag[i] - off[i - 1] * c[i - 1]
        b = np.where(b == 0, 1e-300, b)
        if i < n - 1:
            c[i] = off[i] / b
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / b
    x = np.empty_like(rhs)
    x[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


def inverse_iteration(diag: np.ndarray, off: np.ndarray, shifts: np.ndarray,
                      iterations: int = 3, seed: int = 0) -> np.ndarray:
    """Eigenvectors for the given (accurate) eigenvalue estimates."""
    shifts = np.asarray(shifts, dtype=float)
    rng = np.random.default_rng(seed)
    vecs = rng.standard_normal((diag.shape[0], shifts.size))
    shifted = diag[:, None] - shifts[None, :]
    offs = np.repeat(off[:, None], shifts.size, axis=1)
    for _ in range(iterations):
        vecs = _thomas(shifted, offs, vecs)
        # keep near-degenerate pairs apart
        vecs, _ = np.linalg.qr(vecs)
    return vecs


def _apply(diag: np.ndarray, off: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = diag[:, None] * v
    out[:-1] += off[:, None] * v[1:]
    out[1:] += off[:, None] * v[:-1]
    return out


def _fix_phase(vecs: np.ndarray) -> np.ndarray:
    """Make each column positive at its largest-magnitude entry."""
    peak = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[peak, np.arange(vecs.shape[1])])
    return vecs * signs


def _solve_grid(problem: GridProblem, m: int):
    diag, off = problem.matrix()
    lam = tridiagonal_lowest(diag, off, m)
    ceiling = float(min(problem.potential(np.array([-problem.half_width, problem.half_width]))))
    if lam[-1] >= ceiling:
        raise OracleError(
            f"only eigenvalues below the wall value {ceiling:.6g} are bound; "
            f"level {m - 1} sits at {lam[-1]:.6g}"
        )
    vecs = inverse_iteration(diag, off, lam)
    hv = _apply(diag, off, vecs)
    rayleigh = np.einsum("ij,ij->j", vecs, hv)
    vecs = _fix_phase(vecs)
    resid = np.linalg.norm(_apply(diag, off, vecs) - vecs * rayleigh, axis=0)
    return rayleigh, vecs, resid


def solve_lowest(problem: GridProblem, m: int, *, richardson: bool = True) -> SpectrumReport:
    """The ``m`` lowest levels of the discretized Hamiltonian.

    With ``richardson`` the eigenvalues are extrapolated from the grid and a
    grid with twice as many nodes, cancelling the ``h^2`` error term.
    Eigenvectors and residuals always refer to the base grid.
    """
    if not 1 <= m <= 30:
        raise ValueError("m must be between 1 and 30")
    lam, vecs, resid = _solve_grid(problem, m)
    values = lam
    if richardson:
        fine = problem.refined()
        lam_fine, _, _ = _solve_grid(fine, m)
        h1, h2 = problem.h ** 2, fine.h ** 2
        values = (h1 * lam_fine - h2 * lam) / (h1 - h2)
    if np.any(np.diff(values) <= 0):
        raise OracleError("eigenvalues not strictly increasing; grid too coarse")
    return SpectrumReport(values, vecs, resid, problem.nodes(), lam, problem.h)


def quadrature(samples, h: float) -> float:
    """Composite Simpson rule on an odd number (>= 9) of equally spaced samples."""
    y = np.asarray(samples, dtype=float)
    if y.ndim != 1 or y.size < 9 or y.size % 2 == 0:
        raise ValueError("Simpson quadrature needs an odd number of samples, at least 9")
    return float(simpson(y, dx=h))


def wronskian(p: float, s1: float, s2: float, x, *, digits: int = 40):
    """``phi_{s1} phi'_{s2} - phi'_{s1} phi_{s2}`` at the points ``x``.

    ``s1`` and ``s2`` are raw skews. Seeds and their derivatives are built
    from the Kummer series in ``digits``-digit arithmetic, because the two
    products grow like ``exp(x^2)`` while their difference stays of order one.
    """
    values = []
    with mpmath.workdps(digits):
        mp_p = mpmath.mpf(p)
        for xi in np.atleast_1d(x):
            xi = mpmath.mpf(float(xi))
            z = xi * xi
            even = mpmath.hyp1f1((mp_p + 1) / 2, 0.5, z)
            even_d = 2 * xi * (mp_p + 1) * mpmath.hyp1f1((mp_p + 3) / 2, 1.5, z)
            odd = xi * mpmath.hyp1f1(mp_p / 2 + 1, 1.5, z)
            odd_d = (mpmath.hyp1f1(mp_p / 2 + 1, 1.5, z)
                     + 2 * z * (mp_p + 2) / 3 * mpmath.hyp1f1(mp_p / 2 + 2, 2.5, z))
            damp = mpmath.exp(-z / 2)
            f1 = (even + s1 * odd) * damp
            f2 = (even + s2 * odd) * damp
            d1 = (even_d + s1 * odd_d - xi * (even + s1 * odd)) * damp
            d2 = (even_d + s2 * odd_d - xi * (even + s2 * odd)) * damp
            values.append(float(f1 * d2 - d1 * f2))
    return np.array(values)


def wronskian_check(p: float, s1: float, s2: float, x_list) -> float:
    """Largest deviation of the Wronskian from the constant ``s2 - s1``."""
    limit = s_max(p)
    if abs(s1) >= limit or abs(s2) >= limit:
        raise ValueError(f"raw skews must satisfy |s| < s_max = {limit:.6g}")
    return float(np.max(np.abs(wronskian(p, s1, s2, x_list) - (s2 - s1))))


def schrodinger_residual(params: PartnerParams, k: int, x, h: float = 1e-3) -> np.ndarray:
    """``-psi'' + V psi - E psi`` with a five-point second difference."""
    x = np.asarray(x, dtype=float)
    f = lambda t: eigenstate(k, params, t)
    second = (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h)
    psi = f(x)
    return -second + (partner_potential(params, x) - energy(k, params)) * psi


def gram_matrix(params: PartnerParams, levels: int, x: np.ndarray) -> np.ndarray:
    """Overlaps of the lowest ``levels`` analytic states by Simpson quadrature."""
    h = x[1] - x[0]
    states = [eigenstate(k, params, x) for k in range(-1, levels - 1)]
    return np.array([[quadrature(a * b, h) for b in states] for a in states])


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.measured) and self.measured <= self.tolerance)

    def to_dict(self) -> dict:
        return {"name": self.name, "measured": self.measured,
                "tolerance": self.tolerance, "pass": self.passed}


@dataclass(frozen=True)
class FamilyReport:
    params: PartnerParams
    levels: int
    grid: dict
    checks: list[Check] = field(default_factory=list)
    spectrum: list[float] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.errors and all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "version": __version__,
            "command": "verify",
            "params": {"p": self.params.p, "s_hat": self.params.s_hat,
                       "s_raw": self.params.s_raw, "s_max": self.params.s_max,
                       "levels": self.levels, **self.grid},
            "spectrum": self.spectrum,
            "checks": [c.to_dict() for c in self.checks],
            "errors": self.errors,
            "pass": self.passed,
        }


def default_grid() -> tuple[float, int]:
    """Verification grid, overridable through ``ARTIFACT_GRID_L``/``ARTIFACT_GRID_N``."""
    return (float(os.environ.get("ARTIFACT_GRID_L", DEFAULT_L)),
            int(os.environ.get("ARTIFACT_GRID_N", DEFAULT_N)))


def verify_family(params: PartnerParams, levels: int, *, half_width: float | None = None,
                  n_points: int | None = None) -> FamilyReport:
    """Cross-check one family member against the grid oracle.

    Tolerance misses and sub-check failures are recorded in the report,
    never raised.
    """
    if not 1 <= levels <= 10:
        raise ValueError("levels must be between 1 and 10")
    env_l, env_n = default_grid()
    big_l = env_l if half_width is None else half_width
    n = env_n if n_points is None else n_points
    report = FamilyReport(params, levels, {"grid_L": big_l, "grid_n": n})

    try:
        problem = GridProblem(big_l, n, lambda x: partner_potential(params, x))
        spec = solve_lowest(problem, levels)
        expected = np.array([energy(k, params) for k in range(-1, levels - 1)])
        report.spectrum.extend(float(v) for v in spec.eigenvalues)
        report.checks.append(Check("spectrum", float(np.max(np.abs(spec.eigenvalues - expected))), 1e-3))
    except (OracleError, ValueError) as exc:
        report.errors.append(f"spectrum: {exc}")

    # odd node count so Simpson applies; spacing matches the oracle grid
    m = n + 1 if n % 2 == 0 else n + 2
    x = np.linspace(-big_l, big_l, m)
    h = x[1] - x[0]
    seed = seed_solution(params, x)
    inv_sq = np.exp(-2 * seed.log_abs)
    closed = normalization_integral(params)
    report.checks.append(Check("normalization", abs(quadrature(inv_sq, h) / closed - 1), 1e-8))

    gram = gram_matrix(params, levels, x)
    report.checks.append(Check("orthonormality", float(np.max(np.abs(gram - np.eye(levels)))), 1e-7))

    xr = x[np.abs(x) <= 6]
    worst = 0.0
    for k in range(-1, levels - 1):
        psi = eigenstate(k, params, xr)
        res = schrodinger_residual(params, k, xr)
        worst = max(worst, float(np.max(np.abs(res)) / np.max(np.abs(psi))))
    report.checks.append(Check("schrodinger_residual", worst, 1e-5))
    return report
