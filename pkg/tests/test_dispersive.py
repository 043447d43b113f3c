import numpy as np
import pytest

from wickpde.chaos import ChaosField, field_to_stack, hermite_transform_eval
from wickpde.grids import GridSpec
from wickpde.multiindex import IndexSet
from wickpde.noise import NoiseSpec, smooth, white_noise_field
from wickpde.solvers import CFLViolation
from wickpde.solvers.dispersive import (
    benjamin_ono_periodic_wave,
    kdv_soliton,
    solve_benjamin_ono_wick,
    solve_kdv_wick,
)
from wickpde.solvers.heat import solve_heat_wick, solve_nonlinear_heat_wick
from wickpde.solvers.transport import solve_transport_wick
from wickpde.spectral import hilbert_transform, spectral_derivative

DET = IndexSet(0, 1)


def test_kdv_soliton_one_period():
    g = GridSpec((512,), (50.0,))
    u0, c, _ = kdv_soliton(g, c=1.0)
    phi0 = ChaosField(DET, {(): u0}, grid=g)
    hist = solve_kdv_wick(phi0, g, T=50.0, dt=0.01)
    assert not hist.aborted
    assert np.max(np.abs(hist.final.get(()) - u0)) < 1e-4


def test_kdv_zero_data():
    g = GridSpec((128,), (20.0,))
    hist = solve_kdv_wick(ChaosField.zero(IndexSet(1, 1), grid=g), g, T=1.0, dt=0.01)
    assert all(np.max(np.abs(v)) == 0.0 for v in hist.final.coeffs.values())


def test_kdv_cfl_guard():
    g = GridSpec((512,), (50.0,))
    u0, _, _ = kdv_soliton(g, c=1.0)
    phi0 = ChaosField(DET, {(): u0}, grid=g)
    with pytest.raises(CFLViolation):
        solve_kdv_wick(phi0, g, T=1.0, dt=0.1)


def test_kdv_invariants_at_real_z_with_noise_data():
    # Smoothed spatial noise as initial data; the transformed field solves
    # the plain equation, whose mass and energy are conserved.
    g = GridSpec((256,), (32.0,))
    spec = NoiseSpec(space_dim=1, basis_count=2, gamma=2.0, seed=12)
    W = smooth(white_noise_field(spec, g), 2.0)
    s = IndexSet(3, 2)
    coeffs = {a: 0.05 * v for a, v in W.coeffs.items()}
    phi0 = ChaosField(s, coeffs, grid=g)
    hist = solve_kdv_wick(phi0, g, T=1.0, dt=2e-3, snapshot_every=100)
    z = np.array([0.5, 0.25])
    fields = [np.asarray(hermite_transform_eval(snap, z)) for snap in hist.snapshots]
    masses = [float(np.real(g.integral(f))) for f in fields]
    energies = [float(np.real(g.integral(f * f))) for f in fields]
    assert max(abs(m - masses[0]) for m in masses) < 1e-6
    assert max(abs(e - energies[0]) for e in energies) < 1e-6 * max(abs(energies[0]), 1.0)


def test_bo_wave_is_steady_solution():
    g = GridSpec((512,), (2 * np.pi,))
    u, c, _ = benjamin_ono_periodic_wave(g, s=1.0)
    du = spectral_derivative(u, g, 1)
    res = -c * du + u * du + hilbert_transform(spectral_derivative(u, g, 2), g)
    assert np.max(np.abs(res)) < 1e-9


def test_bo_phase_speed():
    g = GridSpec((512,), (2 * np.pi,))
    u0, c, prof = benjamin_ono_periodic_wave(g, s=1.0)
    phi0 = ChaosField(DET, {(): u0}, grid=g)
    T = 1.0
    hist = solve_benjamin_ono_wick(phi0, g, T, dt=5e-4)
    uT = hist.final.get(())
    f0, fT = np.fft.fft(u0), np.fft.fft(uT)
    k1 = 2 * np.pi / g.lengths[0]
    shift = -np.angle(fT[1] / f0[1]) / k1
    L = g.lengths[0]
    err = abs((shift - c * T + L / 2) % L - L / 2) / T
    assert err < 1e-3
    assert np.max(np.abs(uT - prof(g.axis_coords(0), T))) < 1e-3


def test_bo_zero_data():
    g = GridSpec((128,), (20.0,))
    hist = solve_benjamin_ono_wick(ChaosField.zero(IndexSet(1, 1), grid=g), g, T=0.5, dt=0.005)
    assert all(np.max(np.abs(v)) == 0.0 for v in hist.final.coeffs.values())


def test_bo_mean_invariant_at_real_z():
    g = GridSpec((256,), (32.0,))
    spec = NoiseSpec(space_dim=1, basis_count=2, gamma=2.0, seed=13)
    W = smooth(white_noise_field(spec, g), 2.0)
    s = IndexSet(2, 2)
    phi0 = ChaosField(s, {a: 0.05 * v for a, v in W.coeffs.items()}, grid=g)
    hist = solve_benjamin_ono_wick(phi0, g, T=1.0, dt=2e-3, snapshot_every=100)
    z = np.array([0.5, 0.25])
    masses = [
        float(np.real(g.integral(np.asarray(hermite_transform_eval(snap, z)))))
        for snap in hist.snapshots
    ]
    assert max(abs(m - masses[0]) for m in masses) < 1e-8


def test_rk4_convergence_order():
    # Deterministic nonlinear-heat run; halving dt must cut the error by
    # at least 2^3.5 once the spatial part is exact (constant in x).
    g = GridSpec((32,), (8.0,))
    phi0 = ChaosField(DET, {(): np.full(32, 1.0)}, grid=g)
    exact = 1.0 / (1.0 + 1.0)
    errs = []
    for dt in (0.05, 0.025, 0.0125):
        hist = solve_nonlinear_heat_wick(phi0, 2, g, T=1.0, dt=dt)
        errs.append(abs(float(hist.final.get(())[0]) - exact))
    orders = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert min(orders) > 3.5


def test_spectral_error_floor_band_limited():
    # Band-limited initial data advected by a constant speed comes back to
    # machine precision: the spatial treatment adds no error above 1e-10.
    g = GridSpec((128,), (2 * np.pi,))
    x = g.axis_coords(0)
    u0 = np.sin(3 * x) + 0.2 * np.cos(5 * x)
    gt = GridSpec((128, 16), (2 * np.pi, 2 * np.pi), ("space", "time"))
    noise = ChaosField(
        IndexSet(1, 1), {(): np.ones((128, 16))}, grid=gt
    )
    phi0 = ChaosField(IndexSet(1, 1), {(): u0}, grid=g)
    hist = solve_transport_wick(noise, phi0, g, T=2 * np.pi, dt=2 * np.pi / 8192)
    assert np.max(np.abs(hist.final.get(()) - u0)) < 1e-10


def test_truncation_overflow_decreases_with_degree_cap():
    # Fixed problem, growing truncation: the dropped-mass diagnostic must
    # shrink monotonically as the degree cap rises (transport and heat).
    L = 32.0
    g = GridSpec((128,), (L,))
    x = g.axis_coords(0)
    u0 = np.exp(-((x - L / 2) ** 2) / (2 * 1.5**2))
    T = 0.5
    gt = GridSpec((128, 32), (L, T), ("space", "time"))
    spec = NoiseSpec(space_dim=1, time_extended=True, basis_count=2, gamma=1.0, seed=14)
    noise = smooth(white_noise_field(spec, gt), 1.0)

    heat_over, transport_over = [], []
    for K in (1, 2, 3, 4):
        s = IndexSet(K, 2)
        phi0 = ChaosField(s, {(): u0}, grid=g)
        hist = solve_heat_wick(noise, phi0, 1.0, g, T, dt=5e-3)
        heat_over.append(hist.total_overflow)
        histt = solve_transport_wick(noise, phi0, g, T, dt=5e-3)
        transport_over.append(histt.total_overflow)
    assert all(a > b for a, b in zip(heat_over, heat_over[1:]))
    assert heat_over[-1] > 0
    assert all(a > b for a, b in zip(transport_over, transport_over[1:]))
    assert transport_over[-1] > 0
