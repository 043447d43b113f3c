"""Heat-type Wick solvers and the surface-growth change of variables.

Multiplicative heat: d_t phi = (sigma^2/2) Lap phi + phi <> Gamma with a
degree <= 1 space-time noise.  Strang splitting wraps exact spectral heat
semigroup half-steps around a source step; the source step multiplies the
state by the truncated Wick exponential exp<>(dt Gamma(., t_mid)).  Under
the transform that kick is exactly exp(dt HGamma(z)), so the scheme's
transformed flow is the classical exponential-potential splitting; its
degree-1 part is the midpoint rule for the cross-level source, and the
higher terms keep the per-z flow consistent (and, for Schrodinger-type
twins, unitary) instead of drifting at O(dt^2 V^2) per step.

Nonlinear heat: d_t phi + phi^{<> p} = Lap phi, p in {2, 3}, integrated by
method of lines with the Laplacian folded into an exact integrating factor
and classical RK4 on the Wick-power nonlinearity (2/3-rule de-aliased).

The surface-growth views relate a sampled smooth-noise height profile h to
its gradient flow v = -grad h and exponential transform phi = exp((lam /
2 nu) h); a direct pseudo-spectral integrator for the height equation
d_t h = nu Lap h + (lam/2) |grad h|^2 + W is provided so the views can be
cross-checked pathwise against the quantized solver.
"""

from __future__ import annotations

import numpy as np

from ..chaos import ChaosField, field_to_stack
from ..grids import GridSpec
from ..spectral import SpectralKernel, spectral_derivative
from .base import (
    NoiseSource,
    PropagatorHistory,
    conv_table,
    grid_dealias,
    lawson_rk4_step,
    run_propagator,
    stack_apply,
    stack_dealias,
    wick_conv_stack,
    wick_exp_degree1_stack,
)


def solve_heat_wick(
    noise: ChaosField | None,
    phi0: ChaosField,
    sigma: float,
    grid: GridSpec,
    T: float,
    dt: float,
    snapshot_every: int | None = None,
    sup_bound: float | None = None,
) -> PropagatorHistory:
    """Quantized multiplicative-noise heat equation, Strang-split in time."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    index_set = phi0.index_set
    kern = SpectralKernel(grid)
    half = kern.heat_multiplier(0.5 * sigma**2, 0.5 * dt)
    source = NoiseSource(noise, grid, index_set, max_degree=1) if noise is not None else None
    if source is not None and np.isfinite(source.horizon) and T > source.horizon + 1e-12:
        raise ValueError(f"T={T} exceeds the noise time window {source.horizon}")
    table = conv_table(index_set) if source is not None else None

    def step(state, t, dt):
        state = stack_apply(state, half, grid)
        overflow = 0.0
        if source is not None:
            mid = t + 0.5 * dt
            eps = source.eval_eps(mid) if source.eps_entries else np.zeros((0,) + grid.shape)
            E = wick_exp_degree1_stack(
                eps, source.eps_entries, dt, index_set, zero_val=source.eval_zero(mid)
            )
            state, overflow = wick_conv_stack(E, state, table, grid)
        state = stack_apply(state, half, grid)
        return state, overflow

    state = field_to_stack(phi0)
    return run_propagator(
        "heat", state, index_set, grid, T, dt, step,
        tag=phi0.tag, snapshot_every=snapshot_every, sup_bound=sup_bound,
        params={"sigma": sigma},
    )


def solve_nonlinear_heat_wick(
    phi0: ChaosField,
    p: int,
    grid: GridSpec,
    T: float,
    dt: float,
    snapshot_every: int | None = None,
    sup_bound: float = 1e6,
) -> PropagatorHistory:
    """Quantized reaction-diffusion d_t phi + phi^{<> p} = Lap phi, p = 2 or 3."""
    if p not in (2, 3):
        raise ValueError(f"power p must be 2 or 3, got {p}")
    index_set = phi0.index_set
    kern = SpectralKernel(grid)
    half = kern.heat_multiplier(1.0, 0.5 * dt)
    full = kern.heat_multiplier(1.0, dt)
    mask = kern.dealias_mask
    table = conv_table(index_set)

    def nonlin(state, t):
        u = stack_dealias(state, mask, grid)
        sq, o1 = wick_conv_stack(u, u, table, grid)
        sq = stack_dealias(sq, mask, grid)
        if p == 2:
            return -sq, o1
        cu, o2 = wick_conv_stack(sq, u, table, grid)
        return -stack_dealias(cu, mask, grid), o1 + o2

    def step(state, t, dt):
        return lawson_rk4_step(state, t, dt, half, full, nonlin, grid)

    state = field_to_stack(phi0)
    return run_propagator(
        "nlheat", state, index_set, grid, T, dt, step,
        tag=phi0.tag, snapshot_every=snapshot_every, sup_bound=sup_bound,
        params={"p": p},
    )


class KPZViews:
    """Pathwise views of a sampled height profile: slope field and exponential."""

    def __init__(self, h: np.ndarray, v: list[np.ndarray], phi: np.ndarray):
        self.h = h
        self.v = v
        self.phi = phi


def kpz_views(grid: GridSpec, h: np.ndarray | None = None, phi: np.ndarray | None = None,
              nu: float | None = None, lam: float | None = None,
              sigma: float | None = None) -> KPZViews:
    """Transform a sampled height h (or its exponential phi) between views.

    v = -grad h is the velocity (Burgers) view and phi = exp((lam/2nu) h)
    the exponential view; with the convention nu = sigma^2/2, lam = sigma^2
    the exponent is exactly h.  Give either h or phi.
    """
    if sigma is not None:
        nu, lam = 0.5 * sigma**2, sigma**2
    if nu is None or lam is None:
        raise ValueError("give nu and lam, or sigma")
    ratio = lam / (2.0 * nu)
    if h is None:
        if phi is None:
            raise ValueError("give h or phi")
        h = np.log(phi) / ratio
    phi = np.exp(ratio * h)
    v = [-spectral_derivative(h, grid, 1, axis=ax) for ax in range(grid.dim)]
    return KPZViews(h, v, phi)


def solve_kpz_pathwise(
    h0: np.ndarray,
    forcing,
    nu: float,
    lam: float,
    grid: GridSpec,
    T: float,
    dt: float,
    snapshot_every: int = 1,
):
    """Direct integrator for the height equation with a sampled smooth noise.

    d_t h = nu Lap h + (lam/2) |grad h|^2 + W(x, t), with W given as a
    callable t -> grid array (or None).  Pseudo-spectral with the diffusion
    folded into an exact integrating factor, RK4 on the rest.  Returns
    (times, [h snapshots]).
    """
    kern = SpectralKernel(grid)
    half = kern.heat_multiplier(nu, 0.5 * dt)
    full = kern.heat_multiplier(nu, dt)
    mask = kern.dealias_mask

    def nonlin(state, t):
        h = state[0]
        grad_sq = np.zeros_like(h)
        for ax in range(grid.dim):
            g = grid_dealias(spectral_derivative(h, grid, 1, axis=ax), mask)
            grad_sq += g * g
        out = 0.5 * lam * grid_dealias(grad_sq, mask)
        if forcing is not None:
            out = out + forcing(t)
        return out[None], 0.0

    state = np.asarray(h0, dtype=float)[None]
    n = round(T / dt)
    times = [0.0]
    snaps = [state[0].copy()]
    for i in range(n):
        state, _ = lawson_rk4_step(state, i * dt, dt, half, full, nonlin, grid)
        if (i + 1) % snapshot_every == 0 or i == n - 1:
            times.append((i + 1) * dt)
            snaps.append(state[0].copy())
    return times, snaps
