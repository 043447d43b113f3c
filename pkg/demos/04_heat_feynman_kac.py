"""Multiplicative-noise heat equation, checked three independent ways.

One quantized solve; then, at a fixed transform point z, the solution is
compared against (1) a Crank-Nicolson finite-difference integrator of the
transformed PDE and (2) a Feynman-Kac Monte Carlo average over Brownian
paths through the transformed potential.  Three unrelated discretizations
agreeing is the whole point of the oracle layer.
"""

import numpy as np
import os

from wickpde import ChaosField, GridSpec, IndexSet, NoiseSpec, hermite_transform_eval, smooth, white_noise_field
from wickpde.noise import NoiseBasis
from wickpde.oracle import feynman_kac_mc, solve_deterministic_at_z
from wickpde.solvers import solve_heat_wick

L, T, K, N = 32.0, 0.5, 3, 3
grid = GridSpec((256,), (L,))
x = grid.axis_coords(0)
gt = GridSpec((256, 64), (L, T), ("space", "time"))

spec = NoiseSpec(space_dim=1, time_extended=True, basis_count=N, gamma=0.0, seed=1)
noise = white_noise_field(spec, gt)
basis = NoiseBasis(spec, gt)

w = 1.5
u0 = np.exp(-((x - L / 2) ** 2) / (2 * w**2))
phi0 = ChaosField(IndexSet(K, N), {(): u0}, grid=grid)

hist = solve_heat_wick(noise, phi0, 1.0, grid, T, dt=2e-3)
print(f"chaos solve done: {len(hist.index_set)} coefficients, "
      f"truncation overflow {hist.total_overflow:.2e}")

z = np.array([0.4, 0.2, 0.1])
sol = np.asarray(hermite_transform_eval(hist.final, z))

cn = solve_deterministic_at_z("heat", z, noise, phi0, grid, T, dt=1e-3, sigma=1.0)
rel = grid.l2_norm(sol - cn) / grid.l2_norm(cn)
print(f"vs Crank-Nicolson at z={z}: relative L2 discrepancy {rel:.2e}")


def initial(pts):
    return np.exp(-((pts - L / 2) ** 2) / (2 * w**2))


def potential(pts, s):
    out = np.zeros_like(pts)
    P = np.stack([pts, np.full_like(pts, s)], axis=-1)
    for k in (1, 2, 3):
        out += z[k - 1] * basis.eta_points(k, P)
    return out


print("vs Feynman-Kac Monte Carlo (100k paths):")
for xi in (120, 128, 140):
    est, se = feynman_kac_mc(potential, initial, 1.0, float(x[xi]), T,
                             n_paths=100_000, dt_path=5e-4, seed=42)
    print(f"  x={x[xi]:5.2f}: solver {sol[xi].real:.6f}   "
          f"monte carlo {est:.6f} +/- {se:.6f}  "
          f"({abs(sol[xi].real - est) / se:.2f} sigma)")
