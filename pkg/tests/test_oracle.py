import math

import numpy as np
import pytest

from wickpde.chaos import ChaosField
from wickpde.grids import GridSpec
from wickpde.multiindex import IndexSet, MultiIndex
from wickpde.oracle import (
    OracleReport,
    check_admissible,
    default_z_panel,
    feynman_kac_mc,
    gauss_hermite_moment,
    solve_deterministic_at_z,
    strichartz_diagnostic,
    strichartz_ratio,
    write_reports,
)
from wickpde.solvers.schrodinger import solve_schrodinger_additive

L = 32.0
GRID = GridSpec((256,), (L,))
X = GRID.axis_coords(0)
DET = IndexSet(0, 1)


def test_moment_trivial_and_derived_values():
    assert gauss_hermite_moment((), ()) == pytest.approx(1.0)
    assert gauss_hermite_moment((2,), (2,)) == pytest.approx(2.0, abs=1e-10)
    assert gauss_hermite_moment((1,), (0, 1)) == pytest.approx(0.0, abs=1e-12)


def test_moment_orthogonality_table():
    idx = list(IndexSet(3, 3))
    for a in idx:
        for b in idx:
            expect = float(a.factorial()) if a == b else 0.0
            assert gauss_hermite_moment(a, b) == pytest.approx(expect, abs=1e-10)


def test_moment_full_budget_spot_checks():
    # Top of the exactness budget: degree 8 in one dimension, and mixed
    # four-dimensional indices.
    assert gauss_hermite_moment((8,), (8,)) == pytest.approx(
        math.factorial(8), rel=1e-10
    )
    assert gauss_hermite_moment((8,), (6,)) == pytest.approx(0.0, abs=1e-8)
    a = MultiIndex((2, 2, 2, 2))
    assert gauss_hermite_moment(a, a) == pytest.approx(16.0, rel=1e-10)
    assert gauss_hermite_moment(a, (2, 2, 2, 1)) == pytest.approx(0.0, abs=1e-10)


def test_moment_budget_errors():
    with pytest.raises(ValueError):
        gauss_hermite_moment((9,), ())
    with pytest.raises(ValueError):
        gauss_hermite_moment((1, 1, 1, 1, 1), ())


def test_report_compare_and_csv(tmp_path):
    good = OracleReport.compare("fine", 1.0005, 1.0, 1e-3)
    bad = OracleReport.compare("off", 2.0, 1.0, 1e-3)
    mc = OracleReport.compare("mc", 1.05, 1.0, 0.0, std_error=0.02, n_samples=100)
    assert good.passed and not bad.passed
    assert mc.passed  # within 3 standard errors
    path = tmp_path / "report.csv"
    assert write_reports(path, [good, mc]) == 0
    assert write_reports(path, [good, bad]) == 3
    text = path.read_text()
    assert "FAIL" in text and "pass" in text


def test_default_z_panel_shape():
    panel = default_z_panel(3)
    assert len(panel) == 5
    assert all(len(z) == 3 for z in panel)
    assert any(np.iscomplexobj(z) and np.max(np.abs(z.imag)) > 0 for z in panel)


def test_z_solver_zero_z_is_mean_equation():
    u0 = np.exp(-((X - 16) ** 2) / 2.0)
    phi0 = ChaosField(DET, {(): u0}, grid=GRID)
    out = solve_deterministic_at_z("heat", np.zeros(1), None, phi0, GRID, 0.2, 1e-3)
    w2 = 1.0 + 1.0 * 0.2
    exact = 1.0 / np.sqrt(w2) * np.exp(-((X - 16) ** 2) / (2 * w2))
    assert GRID.l2_norm(np.asarray(out) - exact) / GRID.l2_norm(exact) < 2e-3


def test_z_solver_constant_potential_factorization():
    # Constant potential commutes with diffusion: u = e^{ct} heat(u0).
    u0 = np.exp(-((X - 16) ** 2) / 2.0)
    phi0 = ChaosField(DET, {(): u0}, grid=GRID)
    gt = GridSpec((256,), (L,))
    c = 0.8
    noise = ChaosField(IndexSet(1, 1), {(): np.full(256, c)}, grid=gt)
    T = 0.25
    with_pot = solve_deterministic_at_z("heat", np.zeros(1), noise, phi0, GRID, T, 5e-4)
    without = solve_deterministic_at_z("heat", np.zeros(1), None, phi0, GRID, T, 5e-4)
    np.testing.assert_allclose(with_pot, math.exp(c * T) * without, rtol=1e-6, atol=1e-10)


def test_z_solver_unknown_equation():
    phi0 = ChaosField(DET, {(): np.zeros(256)}, grid=GRID)
    with pytest.raises(ValueError):
        solve_deterministic_at_z("kdv", np.zeros(1), None, phi0, GRID, 0.1, 1e-3)


def test_feynman_kac_zero_potential_heat_kernel():
    # With no potential the estimate is the heat-kernel smoothing of the
    # initial profile; closed form for a gaussian.
    w, sigma, t, x0 = 1.5, 1.0, 0.5, 17.0
    initial = lambda pts: np.exp(-((pts - 16.0) ** 2) / (2 * w**2))
    est, se = feynman_kac_mc(lambda pts, s: 0.0 * pts, initial, sigma, x0, t,
                             n_paths=40_000, dt_path=0.01, seed=5)
    w2 = w**2 + sigma**2 * t
    exact = w / np.sqrt(w2) * np.exp(-((x0 - 16.0) ** 2) / (2 * w2))
    assert abs(est - exact) <= 3 * se


def test_feynman_kac_constant_potential_factor():
    w, sigma, t, x0, c = 1.5, 1.0, 0.4, 16.0, 0.7
    initial = lambda pts: np.exp(-((pts - 16.0) ** 2) / (2 * w**2))
    base, se0 = feynman_kac_mc(lambda pts, s: 0.0 * pts, initial, sigma, x0, t,
                               n_paths=40_000, dt_path=0.005, seed=6)
    bumped, se1 = feynman_kac_mc(lambda pts, s: c + 0.0 * pts, initial, sigma, x0, t,
                                 n_paths=40_000, dt_path=0.005, seed=6)
    assert abs(bumped - math.exp(c * t) * base) <= 3 * math.exp(c * t) * (se0 + se1)


def test_feynman_kac_error_scaling():
    initial = lambda pts: np.exp(-((pts - 16.0) ** 2) / 2.0)
    pot = lambda pts, s: 0.1 * np.exp(-((pts - 16.0) ** 2) / 4.0)
    _, se1 = feynman_kac_mc(pot, initial, 1.0, 16.0, 0.3, n_paths=20_000,
                            dt_path=0.01, seed=7)
    _, se2 = feynman_kac_mc(pot, initial, 1.0, 16.0, 0.3, n_paths=80_000,
                            dt_path=0.01, seed=7)
    assert se1 / se2 == pytest.approx(2.0, rel=0.2)


def test_feynman_kac_deterministic_given_seed():
    initial = lambda pts: np.exp(-((pts - 16.0) ** 2) / 2.0)
    pot = lambda pts, s: 0.0 * pts
    a = feynman_kac_mc(pot, initial, 1.0, 16.0, 0.2, n_paths=10_000, dt_path=0.01, seed=9)
    b = feynman_kac_mc(pot, initial, 1.0, 16.0, 0.2, n_paths=10_000, dt_path=0.01, seed=9)
    assert a == b
    # threaded evaluation must not change the result
    c = feynman_kac_mc(pot, initial, 1.0, 16.0, 0.2, n_paths=10_000, dt_path=0.01,
                       seed=9, workers=4)
    assert a == c


def test_admissibility():
    check_admissible(8.0, 4.0, 1)
    check_admissible(np.inf, 2.0, 1)
    with pytest.raises(ValueError):
        check_admissible(8.0, 5.0, 1)
    with pytest.raises(ValueError):
        check_admissible(1.5, 4.0, 1)


def test_strichartz_zero_data_and_unitarity():
    psi0 = ChaosField(DET, {(): np.zeros(256, dtype=complex)}, grid=GRID)
    hist = solve_schrodinger_additive(None, psi0, GRID, T=0.5, dt=0.01, snapshot_every=5)
    snaps = [np.asarray(s.get(())) for s in hist.snapshots]
    assert strichartz_ratio(hist.times, snaps, GRID, 8.0, 4.0) == 0.0

    u0 = np.exp(-((X - 16) ** 2) / 2.0).astype(complex)
    psi0 = ChaosField(DET, {(): u0}, grid=GRID)
    hist = solve_schrodinger_additive(None, psi0, GRID, T=0.5, dt=0.01, snapshot_every=5)
    snaps = [np.asarray(s.get(())) for s in hist.snapshots]
    l2 = [GRID.l2_norm(u) for u in snaps]
    assert max(abs(v - l2[0]) for v in l2) < 1e-12  # r = 2 endpoint sanity
    rep = strichartz_diagnostic(hist.times, snaps, GRID, 8.0, 4.0)
    assert rep.passed and np.isfinite(rep.solver_value) and rep.solver_value > 0


def test_strichartz_refinement_report():
    def free_run(nx, dt):
        g = GridSpec((nx,), (L,))
        x = g.axis_coords(0)
        u0 = np.exp(-((x - 16) ** 2) / 2.0).astype(complex)
        psi0 = ChaosField(DET, {(): u0}, grid=g)
        hist = solve_schrodinger_additive(None, psi0, g, T=1.0, dt=dt, snapshot_every=1)
        return g, hist.times, [np.asarray(s.get(())) for s in hist.snapshots]

    g_c, t_c, u_c = free_run(128, 0.02)
    coarse = strichartz_ratio(t_c, u_c, g_c, 8.0, 4.0)
    g_f, t_f, u_f = free_run(256, 0.01)
    rep = strichartz_diagnostic(t_f, u_f, g_f, 8.0, 4.0, reference_ratio=coarse)
    assert rep.passed
    assert rep.rel_error < 0.05
