"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines; every
check asserts at its stated tolerance and runtime budget.
"""

import os
import time

import numpy as np
import pytest

from wickpde.chaos import (
    ChaosField,
    field_to_stack,
    hermite_transform_eval,
    wick_mul,
)
from wickpde.cli import main as cli_main
from wickpde.grids import GridSpec
from wickpde.multiindex import IndexSet, MultiIndex, unit_index
from wickpde.noise import (
    NoiseBasis,
    NoiseSpec,
    brownian_sheet_field,
    hermite_window,
    smooth,
    white_noise_field,
)
from wickpde.oracle import (
    default_z_panel,
    feynman_kac_mc,
    gauss_hermite_moment,
    solve_deterministic_at_z,
    strichartz_ratio,
)
from wickpde.solvers.dispersive import kdv_soliton, solve_benjamin_ono_wick, solve_kdv_wick
from wickpde.solvers.heat import solve_heat_wick, solve_nonlinear_heat_wick
from wickpde.solvers.schrodinger import (
    solve_schrodinger_additive,
    solve_schrodinger_mult_wick,
)
from wickpde.solvers.transport import eval_transport_characteristic, solve_transport_wick
from wickpde.spectral import hilbert_transform


def _report(num: int, name: str, ok: bool, detail: str, elapsed: float, budget: float):
    status = "PASS" if ok and elapsed < budget else "FAIL"
    print(f"[criterion {num}] {status} {name}: {detail} ({elapsed:.1f}s, budget {budget:.0f}s)")
    assert ok, f"criterion {num} ({name}): {detail}"
    assert elapsed < budget, f"criterion {num} ({name}) runtime {elapsed:.1f}s over budget {budget}s"


def _integer_field(index_set, rng):
    return ChaosField(index_set, {a: float(rng.integers(-4, 5)) for a in index_set})


def test_criterion_1_algebra_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(100)
    ok = True
    detail = []

    # commutativity / bilinearity: exact coefficient equality
    s = IndexSet(3, 3)
    for _ in range(10):
        F, G, H = (_integer_field(s, rng) for _ in range(3))
        if wick_mul(F, G).coeffs != wick_mul(G, F).coeffs:
            ok, _ = False, detail.append("commutativity broke")
        lhs = wick_mul(F.scale(2.0) + G, H)
        rhs = wick_mul(F, H).scale(2.0) + wick_mul(G, H)
        if lhs.coeffs != rhs.coeffs:
            ok, _ = False, detail.append("bilinearity broke")

    # associativity on truncation-closed triples (degrees <= 2, N <= 3)
    small, target = IndexSet(2, 3), IndexSet(6, 3)
    for _ in range(10):
        F, G, H = (
            ChaosField(target, dict(_integer_field(small, rng).coeffs)) for _ in range(3)
        )
        if (
            wick_mul(wick_mul(F, G), H).coeffs
            != wick_mul(F, wick_mul(G, H)).coeffs
        ):
            ok, _ = False, detail.append("associativity broke")

    # transform multiplicativity over 100 random z
    smallz, targetz = IndexSet(3, 4), IndexSet(6, 4)
    F = ChaosField(targetz, {a: rng.normal() for a in smallz})
    G = ChaosField(targetz, {a: rng.normal() for a in smallz})
    P = wick_mul(F, G)
    worst = 0.0
    for _ in range(100):
        z = rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4)
        lhs = hermite_transform_eval(P, z)
        rhs = hermite_transform_eval(F, z) * hermite_transform_eval(G, z)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    if worst >= 1e-12:
        ok, _ = False, detail.append(f"multiplicativity rel err {worst:.2e}")

    _report(1, "wick algebra", ok,
            detail[0] if detail else f"exact identities, transform rel err {worst:.1e} < 1e-12",
            time.perf_counter() - t0, 10.0)


def test_criterion_2_orthogonality_suite():
    t0 = time.perf_counter()
    idx = list(IndexSet(3, 3))
    worst = 0.0
    for a in idx:
        for b in idx:
            expect = float(a.factorial()) if a == b else 0.0
            worst = max(worst, abs(gauss_hermite_moment(a, b) - expect))
    _report(2, "chaos orthogonality", worst <= 1e-10,
            f"max |E[H_a H_b] - delta a!| = {worst:.2e} (tol 1e-10)",
            time.perf_counter() - t0, 30.0)


def test_criterion_3_brownian_covariance():
    t0 = time.perf_counter()
    N = 200
    L = 2 * hermite_window(N)
    grid = GridSpec((4096,), (L,))
    B = brownian_sheet_field(NoiseSpec(basis_count=N), grid)
    stack = field_to_stack(B)
    y = grid.axis_coords(0) - L / 2
    targets = np.linspace(0.0, 1.0, 32)
    idx = np.array([int(np.argmin(np.abs(y - t))) for t in targets])
    ys = y[idx]
    vals = stack[:, idx]
    cov = vals.T @ vals
    exact = np.minimum.outer(ys, ys)
    sup = float(np.max(np.abs(cov - exact)))
    _report(3, "brownian sheet covariance", sup <= 0.05,
            f"sup panel |Cov - min(x,y)| = {sup:.3f} (tol 0.05, {N} basis functions)",
            time.perf_counter() - t0, 60.0)


def _x_independent_noise(nx: int, L: float, T: float, n: int, amps):
    gt = GridSpec((nx, 64), (L, T), ("space", "time"))
    spec = NoiseSpec(space_dim=1, time_extended=True, basis_count=n, seed=0)
    basis = NoiseBasis(spec, gt)
    tg = gt.axis_coords(1)
    y_t = basis.chart(1, tg)
    coeffs = {}
    from wickpde.hermite import hermite_fn

    for k in range(1, n + 1):
        prof = amps[k - 1] * hermite_fn(k, y_t)
        coeffs[unit_index(k)] = np.tile(prof[None, :], (nx, 1))
    return ChaosField(IndexSet(1, n), coeffs, grid=gt)


def _rel_l2(grid, a, b):
    return grid.l2_norm(np.asarray(a) - np.asarray(b)) / max(grid.l2_norm(np.asarray(b)), 1e-300)


def test_criterion_4_per_z_master():
    t0 = time.perf_counter()
    T, L, K, N = 0.5, 32.0, 3, 3
    panel_msgs = []
    ok = True

    def gauss_profile(y):
        y = np.asarray(y)
        return np.exp(-((y - L / 2) ** 2) / (2 * 1.5**2))

    # transport: x-independent noise, characteristics oracle
    def transport_disc(nx, dt):
        grid = GridSpec((nx,), (L,))
        noise = _x_independent_noise(nx, L, T, N, amps=(0.6, 0.5, 0.4))
        phi0 = ChaosField(IndexSet(K, N), {(): gauss_profile(grid.axis_coords(0))}, grid=grid)
        hist = solve_transport_wick(noise, phi0, grid, T, dt)
        worst = 0.0
        for z in default_z_panel(N):
            sol = hermite_transform_eval(hist.final, z)
            oracle = eval_transport_characteristic(grid.axis_coords(0), T, z, noise, gauss_profile)
            worst = max(worst, _rel_l2(grid, sol, oracle))
        return worst

    coarse = transport_disc(128, 0.05)
    fine = transport_disc(256, 0.0125)
    if not (fine <= 1e-3 and fine < coarse):
        ok = False
    panel_msgs.append(f"transport {fine:.1e} (coarse {coarse:.1e})")

    # heat and multiplicative Schrodinger: CN oracle
    def chaos_disc(equation, nx, dt, dt_oracle):
        grid = GridSpec((nx,), (L,))
        gt = GridSpec((nx, 64), (L, T), ("space", "time"))
        spec = NoiseSpec(space_dim=1, time_extended=True, basis_count=N, gamma=1.0, seed=2)
        noise = smooth(white_noise_field(spec, gt), spec.gamma)
        u0 = gauss_profile(grid.axis_coords(0))
        if equation == "schrodinger-mult":
            u0 = u0.astype(complex)
        phi0 = ChaosField(IndexSet(K, N), {(): u0}, grid=grid)
        if equation == "heat":
            hist = solve_heat_wick(noise, phi0, 1.0, grid, T, dt)
        else:
            hist = solve_schrodinger_mult_wick(noise, phi0, grid, T, dt)
        worst = 0.0
        for z in default_z_panel(N):
            sol = hermite_transform_eval(hist.final, z)
            oracle = solve_deterministic_at_z(equation, z, noise, phi0, grid, T,
                                              dt_oracle, sigma=1.0)
            worst = max(worst, _rel_l2(grid, sol, oracle))
        return worst

    for eq in ("heat", "schrodinger-mult"):
        coarse = chaos_disc(eq, 128, 0.01, 0.005)
        fine = chaos_disc(eq, 256, 0.0025, 0.00125)
        if not (fine <= 1e-3 and fine < coarse):
            ok = False
        panel_msgs.append(f"{eq} {fine:.1e} (coarse {coarse:.1e})")

    _report(4, "per-z oracle equivalence", ok,
            "; ".join(panel_msgs) + " [tol 1e-3, refinement decreasing]",
            time.perf_counter() - t0, 300.0)


def test_criterion_5_feynman_kac():
    t0 = time.perf_counter()
    T, L, K, N = 0.5, 32.0, 3, 3
    dt = 2e-3
    grid = GridSpec((256,), (L,))
    gt = GridSpec((256, 64), (L, T), ("space", "time"))
    spec = NoiseSpec(space_dim=1, time_extended=True, basis_count=N, gamma=0.0, seed=1)
    noise = white_noise_field(spec, gt)
    basis = NoiseBasis(spec, gt)
    x = grid.axis_coords(0)
    w = 1.5
    u0 = np.exp(-((x - L / 2) ** 2) / (2 * w**2))
    phi0 = ChaosField(IndexSet(K, N), {(): u0}, grid=grid)
    hist = solve_heat_wick(noise, phi0, 1.0, grid, T, dt, snapshot_every=125)
    z = np.array([0.4, 0.2, 0.1])

    def initial(pts):
        return np.exp(-((pts - L / 2) ** 2) / (2 * w**2))

    def potential(pts, s):
        out = np.zeros_like(pts)
        P = np.stack([pts, np.full_like(pts, s)], axis=-1)
        for k in (1, 2, 3):
            out += z[k - 1].real * basis.eta_points(k, P)
        return out

    probes = [(1, 120), (1, 128), (2, 120), (2, 136), (2, 128)]
    ok = True
    worst_sigma = 0.0
    for snap_i, xi in probes:
        t_probe = hist.times[snap_i]
        sol = float(np.real(np.asarray(hermite_transform_eval(hist.snapshots[snap_i], z))[xi]))
        est, se = feynman_kac_mc(potential, initial, 1.0, float(x[xi]), t_probe,
                                 n_paths=100_000, dt_path=dt / 4, seed=42)
        dev = abs(sol - est) / se
        worst_sigma = max(worst_sigma, dev)
        if dev > 3.0:
            ok = False
    _report(5, "feynman-kac cross-check", ok,
            f"worst deviation {worst_sigma:.2f} sigma over 5 probes (limit 3)",
            time.perf_counter() - t0, 120.0)


def test_criterion_6_deterministic_regressions():
    t0 = time.perf_counter()
    det = IndexSet(0, 1)
    msgs, ok = [], True

    # free-Schrodinger gaussian spreading
    L = 32.0
    grid = GridSpec((256,), (L,))
    x = grid.axis_coords(0)
    xc = x - L / 2
    psi0 = ChaosField(det, {(): np.exp(-(xc**2) / 2.0).astype(complex)}, grid=grid)
    hist = solve_schrodinger_additive(None, psi0, grid, T=1.0, dt=0.01)
    den = 1.0 + 2j
    exact = 1.0 / np.sqrt(den) * np.exp(-(xc**2) / (2 * den))
    err = float(np.max(np.abs(hist.final.get(()) - exact)))
    ok &= err < 1e-6
    msgs.append(f"spreading {err:.1e}")

    # heat-kernel decay
    phi0 = ChaosField(det, {(): np.exp(-(xc**2) / 2.0)}, grid=grid)
    histh = solve_heat_wick(None, phi0, 1.0, grid, T=1.0, dt=0.01)
    w2 = 1.0 + 1.0
    exacth = 1.0 / np.sqrt(w2) * np.exp(-(xc**2) / (2 * w2))
    errh = float(np.max(np.abs(histh.final.get(()) - exacth)))
    ok &= errh < 1e-6
    msgs.append(f"heat decay {errh:.1e}")

    # KdV soliton shape after one period at 512 modes
    gk = GridSpec((512,), (50.0,))
    u0, c, _ = kdv_soliton(gk, c=1.0)
    hk = solve_kdv_wick(ChaosField(det, {(): u0}, grid=gk), gk, T=50.0, dt=0.01)
    errk = float(np.max(np.abs(hk.final.get(()) - u0)))
    ok &= errk < 1e-4
    msgs.append(f"kdv soliton {errk:.1e}")

    # nonlinear-heat constant-data ODE
    gn = GridSpec((64,), (16.0,))
    hn = solve_nonlinear_heat_wick(
        ChaosField(det, {(): np.full(64, 1.0)}, grid=gn), 2, gn, T=1.0, dt=0.005
    )
    errn = float(np.max(np.abs(hn.final.get(()) - 0.5)))
    ok &= errn < 1e-8
    msgs.append(f"reaction ode {errn:.1e}")

    # Hilbert involution
    rng = np.random.default_rng(4)
    f = sum(rng.normal() * np.cos(k * 2 * np.pi * x / L) for k in range(1, 30)) + 1.0
    hh = hilbert_transform(hilbert_transform(f, grid), grid)
    errhh = float(np.max(np.abs(hh + (f - f.mean()))))
    ok &= errhh < 1e-12
    msgs.append(f"hilbert involution {errhh:.1e}")

    _report(6, "deterministic regressions", ok, "; ".join(msgs),
            time.perf_counter() - t0, 120.0)


def test_criterion_7_conservation_at_real_z():
    t0 = time.perf_counter()
    ok, msgs = True, []
    L = 32.0
    grid = GridSpec((256,), (L,))
    x = grid.axis_coords(0)
    xc = x - L / 2

    # multiplicative Schrodinger L2 over T = 1
    T = 1.0
    gt = GridSpec((256, 64), (L, T), ("space", "time"))
    spec = NoiseSpec(space_dim=1, time_extended=True, basis_count=3, gamma=1.0, seed=3)
    noise = smooth(white_noise_field(spec, gt), spec.gamma)
    psi0 = ChaosField(IndexSet(4, 3), {(): np.exp(-(xc**2) / (2 * 1.5**2)).astype(complex)},
                      grid=grid)
    hist = solve_schrodinger_mult_wick(noise, psi0, grid, T, dt=1e-3, snapshot_every=100)
    z = np.array([0.3, 0.1, 0.05])
    norms = [grid.l2_norm(np.asarray(hermite_transform_eval(s, z))) for s in hist.snapshots]
    drift = max(abs(n - norms[0]) for n in norms) / norms[0]
    ok &= drift < 1e-6
    msgs.append(f"schrodinger L2 drift {drift:.1e} (tol 1e-6)")

    # KdV invariants with smoothed spatial noise data
    specx = NoiseSpec(space_dim=1, basis_count=2, gamma=2.0, seed=12)
    W = smooth(white_noise_field(specx, grid), 2.0)
    phi0 = ChaosField(IndexSet(3, 2), {a: 0.05 * v for a, v in W.coeffs.items()}, grid=grid)
    histk = solve_kdv_wick(phi0, grid, T=1.0, dt=2e-3, snapshot_every=100)
    zk = np.array([0.5, 0.25])
    fields = [np.asarray(hermite_transform_eval(s, zk)) for s in histk.snapshots]
    mass = [float(np.real(grid.integral(f))) for f in fields]
    energy = [float(np.real(grid.integral(f * f))) for f in fields]
    dm = max(abs(m - mass[0]) for m in mass)
    de = max(abs(e - energy[0]) for e in energy) / max(abs(energy[0]), 1e-300)
    ok &= dm < 1e-6 and de < 1e-6
    msgs.append(f"kdv mass {dm:.1e}, energy {de:.1e} (tol 1e-6)")

    # BO mean invariant
    phib = ChaosField(IndexSet(2, 2), {a: 0.05 * v for a, v in W.coeffs.items()}, grid=grid)
    histb = solve_benjamin_ono_wick(phib, grid, T=1.0, dt=2e-3, snapshot_every=100)
    massb = [
        float(np.real(grid.integral(np.asarray(hermite_transform_eval(s, zk)))))
        for s in histb.snapshots
    ]
    db = max(abs(m - massb[0]) for m in massb)
    ok &= db < 1e-8
    msgs.append(f"bo mass {db:.1e} (tol 1e-8)")

    _report(7, "conservation at real z", ok, "; ".join(msgs),
            time.perf_counter() - t0, 120.0)


def test_criterion_8_strichartz_boundedness():
    t0 = time.perf_counter()
    det = IndexSet(0, 1)
    L = 32.0

    def ratio(nx, dt):
        g = GridSpec((nx,), (L,))
        x = g.axis_coords(0)
        u0 = np.exp(-((x - L / 2) ** 2) / 2.0).astype(complex)
        psi0 = ChaosField(det, {(): u0}, grid=g)
        hist = solve_schrodinger_additive(None, psi0, g, T=1.0, dt=dt, snapshot_every=1)
        snaps = [np.asarray(s.get(())) for s in hist.snapshots]
        return strichartz_ratio(hist.times, snaps, g, 8.0, 4.0)

    r0 = ratio(128, 0.02)
    r1 = ratio(256, 0.01)
    r2 = ratio(512, 0.005)
    v1 = abs(r1 - r0) / r0
    v2 = abs(r2 - r1) / r1
    ok = v1 < 0.05 and v2 < 0.05
    _report(8, "strichartz mixed-norm boundedness", ok,
            f"ratios {r0:.5f} -> {r1:.5f} -> {r2:.5f}, variation {max(v1, v2):.2%} (< 5%)",
            time.perf_counter() - t0, 60.0)


def test_criterion_9_reproducibility(tmp_path):
    t0 = time.perf_counter()
    cfg = """\
equation = heat
seed = 21
grid.nx = 128
grid.length = 32.0
chaos.k = 2
chaos.n = 2
noise.gamma = 1.0
noise.nt = 32
time.t = 0.25
time.dt = 0.005
time.snapshot_every = 25
init.profile = gaussian
init.width = 1.5
eq.sigma = 1.0
oracle.panel = per-z
"""
    cfg_path = tmp_path / "cfg.txt"
    cfg_path.write_text(cfg)
    out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
    rc1 = cli_main(["run", "--config", str(cfg_path), "--out", out1])
    rc2 = cli_main(["run", "--config", str(cfg_path), "--out", out2])
    ok = rc1 == 0 and rc2 == 0
    checked = 0
    for root, _dirs, files in os.walk(out1):
        for name in files:
            if name == "manifest.txt":
                continue  # carries wall-clock timing, not a numeric payload
            rel = os.path.relpath(os.path.join(root, name), out1)
            a = open(os.path.join(out1, rel), "rb").read()
            b = open(os.path.join(out2, rel), "rb").read()
            if a != b:
                ok = False
            checked += 1
    _report(9, "bitwise reproducibility", ok and checked >= 5,
            f"{checked} exported files byte-identical across two runs",
            time.perf_counter() - t0, 60.0)
