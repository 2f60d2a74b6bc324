"""Acceptance criteria, one test per criterion (criterion 7 has two parts).

Each test records a PASS/FAIL line that the terminal summary prints at the
end of the run, so the verdicts are visible even when output is captured.
"""
import itertools
import math
import time

import numpy as np
import pytest
import sympy

from conftest import ACCEPTANCE
from susyqho.bec import TrapSpec, critical_temperature
from susyqho.cli import main
from susyqho.model import (
    PartnerParams,
    eigenstate,
    energy,
    normalization_integral,
    oscillator_state,
    partner_potential,
    seed_solution,
)
from susyqho.oracle import (
    GridProblem,
    gram_matrix,
    quadrature,
    schrodinger_residual,
    solve_lowest,
    wronskian,
)
from susyqho.specfun import (
    kummer_m,
    kummer_m_deriv,
    kummer_transform_check,
    log_gamma,
    pseudo_hermite,
    s_max,
)

FAMILY = list(itertools.product([0.5, 1.0, 2.0, 4.0, -0.3, -0.9], [0.0, 0.5, 0.9]))
GRID_L, GRID_N = 12.0, 6000
# Simpson nodes with the oracle's spacing (odd count)
QUAD_X = np.linspace(-GRID_L, GRID_L, GRID_N + 1)
QUAD_H = QUAD_X[1] - QUAD_X[0]


def record(name, ok, detail):
    ACCEPTANCE[name] = (bool(ok), detail)
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, detail


def case_rng(seed):
    return np.random.default_rng(seed)


def test_criterion_1_spectrum():
    worst, where = 0.0, None
    for p, s_hat in FAMILY:
        params = PartnerParams(p, s_hat)
        problem = GridProblem(GRID_L, GRID_N, lambda x, params=params: partner_potential(params, x))
        got = solve_lowest(problem, 5).eigenvalues
        err = float(np.max(np.abs(got - np.array([1 - 2 * p, 3, 5, 7, 9]))))
        if err > worst:
            worst, where = err, (p, s_hat)
    record("1 spectrum", worst <= 1e-3,
           f"max |E_grid - E| = {worst:.2e} over {len(FAMILY)} families (worst p, s_hat = {where}), tol 1e-3")


def test_criterion_2_normalization():
    rng = case_rng(2)
    pairs = [(0.0, 0.0)] + list(zip(rng.uniform(-0.95, 6.0, 19), rng.uniform(-0.95, 0.95, 19)))
    worst = 0.0
    for p, s_hat in pairs:
        params = PartnerParams(float(p), float(s_hat))
        numeric = quadrature(np.exp(-2 * seed_solution(params, QUAD_X).log_abs), QUAD_H)
        worst = max(worst, abs(numeric / normalization_integral(params) - 1))
    i00 = quadrature(np.exp(-2 * seed_solution(PartnerParams(0.0), QUAD_X).log_abs), QUAD_H)
    # the alternative closed form with Gamma((p+1)/2)^2 below the line
    alt = lambda p: math.exp(0.5 * math.log(math.pi) + log_gamma(p + 1) - p * math.log(2)
                             - 2 * log_gamma((p + 1) / 2))
    alt_err = abs(alt(0.0) / i00 - 1)
    ok = worst <= 1e-8 and abs(i00 / math.sqrt(math.pi) - 1) <= 1e-8 and alt_err > 1e-2
    record("2 normalization", ok,
           f"max rel err {worst:.2e} on {len(pairs)} pairs, I_00/sqrt(pi) - 1 = {i00 / math.sqrt(math.pi) - 1:.1e}; "
           f"Gamma((p+1)/2)^2 variant off by {alt_err:.2f} at p=0 (rejected), tol 1e-8")


def test_criterion_3_wronskian():
    rng = case_rng(3)
    x = [0.0, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0]
    worst_dev, worst_origin = 0.0, 0.0
    for _ in range(10):
        p = float(rng.uniform(-0.95, 6.0))
        s1, s2 = (float(v) for v in rng.uniform(-0.99, 0.99, 2) * s_max(p))
        values = wronskian(p, s1, s2, x)
        scale = max(1.0, abs(s2 - s1))
        worst_dev = max(worst_dev, float(np.max(np.abs(values - values[0]))) / scale)
        worst_origin = max(worst_origin, abs(values[0] - (s2 - s1)) / scale)
    record("3 wronskian", worst_dev <= 1e-9 and worst_origin <= 1e-9,
           f"constancy dev {worst_dev:.1e}, |W(0) - (s2 - s1)| {worst_origin:.1e} on 10 triples, tol 1e-9")


def test_criterion_4_orthonormality():
    worst = 0.0
    for p, s_hat in FAMILY:
        gram = gram_matrix(PartnerParams(p, s_hat), 7, QUAD_X)
        worst = max(worst, float(np.max(np.abs(gram - np.eye(7)))))
    record("4 orthonormality", worst <= 1e-7,
           f"max |G - I| = {worst:.2e} for psi_-1..psi_5 over {len(FAMILY)} families, tol 1e-7")


def test_criterion_5_residual():
    xr = QUAD_X[np.abs(QUAD_X) <= 6]
    worst = 0.0
    for p, s_hat in FAMILY:
        params = PartnerParams(p, s_hat)
        for k in range(-1, 6):
            res = schrodinger_residual(params, k, xr)
            worst = max(worst, float(np.max(np.abs(res)) / np.max(np.abs(eigenstate(k, params, xr)))))
    record("5 schrodinger residual", worst <= 1e-5,
           f"max relative residual {worst:.2e} on {xr.size} points, levels -1..5, tol 1e-5")


def test_criterion_6_harmonic_reduction():
    params = PartnerParams(0.0)
    x = QUAD_X
    pot_err = float(np.max(np.abs(partner_potential(params, x) - x * x) / np.maximum(1, x * x)))
    energies_ok = all(energy(k, params) == 2 * k + 3 for k in range(-1, 10))
    fn_err = max(float(np.max(np.abs(eigenstate(k, params, x) - oscillator_state(k + 1, x))))
                 for k in range(-1, 10))
    problem = GridProblem(GRID_L, GRID_N, lambda t: partner_potential(params, t))
    spec = solve_lowest(problem, 6)
    grid_e = float(np.max(np.abs(spec.eigenvalues - np.arange(1, 12, 2))))
    grid_f = 0.0
    for n in range(6):
        grid = spec.wavefunction(n)
        exact = oscillator_state(n, spec.nodes)
        exact = exact * np.sign(np.dot(exact, grid))
        grid_f = max(grid_f, float(np.max(np.abs(grid - exact))))
    ok = pot_err <= 1e-10 and energies_ok and fn_err <= 1e-10 and grid_e <= 1e-3 and grid_f <= 1e-3
    record("6 harmonic reduction", ok,
           f"potential {pot_err:.1e}, eigenfunctions {fn_err:.1e} (tol 1e-10); "
           f"oracle energies {grid_e:.1e}, oracle vectors {grid_f:.1e} (tol 1e-3)")


def test_criterion_7_doubling():
    start = time.perf_counter()
    ratio = (critical_temperature(TrapSpec(10 ** 5, 200.0))
             / critical_temperature(TrapSpec(10 ** 5, 0.0)))
    elapsed = time.perf_counter() - start
    record("7 doubling", abs(ratio - 2) <= 0.2 and elapsed < 1,
           f"Tc(p=200)/Tc(0) = {ratio:.4f} at N=1e5 (target 2 +/- 10%), {elapsed * 1e3:.0f} ms")


def test_criterion_7_large_n():
    n = 10 ** 5
    tc = critical_temperature(TrapSpec(n, 0.0))
    ref = n / math.log(n)
    rel = tc / ref - 1
    # Expected to fail: the closed form gives T ln T = N, and N / ln N is only
    # its first iterate, off by ln ln N / ln N, about 24% at N = 1e5.
    record("7 large-N", abs(rel) <= 0.05,
           f"Tc(p=0) = {tc:.1f} vs N/ln N = {ref:.1f}, rel diff {rel:+.3f} (tol 0.05); Tc ln Tc / N = "
           f"{tc * math.log(tc) / n:.4f}")


def _rodrigues(p_max, xs):
    t = sympy.symbols("t")
    table = {}
    for p in range(p_max + 1):
        expr = sympy.expand(sympy.simplify(sympy.exp(-t ** 2) * sympy.diff(sympy.exp(t ** 2), t, p)))
        table[p] = [float(expr.subs(t, sympy.Rational(str(x)))) for x in xs]
    return table


def test_criterion_8_special_functions():
    rng = case_rng(8)
    transform = max(kummer_transform_check(float(rng.uniform(1e-6, 5)), float(rng.choice([0.5, 1.5, 2.5])),
                                           float(rng.uniform(0, 50))) for _ in range(100))
    deriv, h = 0.0, 1e-5
    for _ in range(50):
        a, c, z = float(rng.uniform(0.05, 5)), float(rng.choice([0.5, 1.5, 2.5])), float(rng.uniform(0.01, 50))
        fd = (kummer_m(a, c, z + h).value() - kummer_m(a, c, z - h).value()) / (2 * h)
        deriv = max(deriv, abs(kummer_m_deriv(a, c, z).value() / fd - 1))
    xs = [0.0, 0.25, -0.5, 1.0, -1.5, 2.0, 3.0]
    herm = 0.0
    for p, values in _rodrigues(6, xs).items():
        for x, ref in zip(xs, values):
            herm = max(herm, abs(pseudo_hermite(p, x) - ref) / max(1.0, abs(ref)))
    ok = transform <= 1e-11 and deriv <= 1e-6 and herm <= 1e-12
    record("8 special functions", ok,
           f"Kummer transform {transform:.1e} (tol 1e-11), derivative vs FD {deriv:.1e} (tol 1e-6), "
           f"pseudo-Hermite vs Rodrigues {herm:.1e} (tol 1e-12)")


def _read(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    return lines[0].split(","), np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])


def test_criterion_9_figures(tmp_path):
    start = time.perf_counter()
    code = main(["figures", "all", "--outdir", str(tmp_path)])
    elapsed = time.perf_counter() - start
    notes, ok = [], code == 0

    _, v1 = _read(tmp_path / "fig1_potential.csv")
    x = v1[:, 0]
    mid = int(np.flatnonzero(x == 0)[0])
    fig1 = np.allclose(v1[mid, 1:], [-4 * p for p in (0.5, 1, 2, 4)], atol=1e-12)
    notes.append(f"fig1 V(0)=-4p {fig1}")

    _, v2 = _read(tmp_path / "fig2_potential.csv")
    fig2 = np.allclose(v2[mid, 1:], [-4 * p for p in (-0.3, -0.5, -0.7, -0.9)], atol=1e-12)
    wells = []
    for col in v2[:, 1:].T:
        idx = np.flatnonzero((col[1:-1] < col[:-2]) & (col[1:-1] < col[2:])) + 1
        # minima of the double well proper; near p = -1 the bump grows a
        # shallow central minimum of its own, which lies at V(0) and is excluded
        wells.append(int(np.sum(col[idx] < col[mid])))
    fig2 = fig2 and all(v > 0 for v in v2[mid, 1:]) and wells == [2, 2, 2, 2]
    notes.append(f"fig2 V(0)>0 and two wells {fig2}")

    for which in (3, 4):
        _, g = _read(tmp_path / f"fig{which}_ground.csv")
        peaks = g[np.argmax(np.abs(g[:, 1:]), axis=0), 0]
        mono = bool(np.all(np.diff(peaks) > 0))
        notes.append(f"fig{which} peaks {np.round(peaks, 2).tolist()} increasing {mono}")
        ok = ok and mono

    _, f5 = _read(tmp_path / "fig5_tc.csv")
    ratio200 = f5[np.searchsorted(f5[:, 0], 200.0), 2]
    fig5 = bool(np.all(np.diff(f5[:, 2]) > 0)) and f5[0, 2] == 1.0 and abs(ratio200 - 2) <= 0.2
    notes.append(f"fig5 monotone, ratio(200) = {ratio200:.3f} {fig5}")

    ok = ok and fig1 and fig2 and fig5 and elapsed < 60
    record("9 figures", ok, "; ".join(notes) + f"; {elapsed:.1f} s")


@pytest.fixture(scope="module", autouse=True)
def _family_size():
    assert len(FAMILY) == 18
