"""Schrodinger-type Wick solvers: additive, multiplicative and cubic.

All three run on 1-D or 2-D periodic grids with the free flow exp(i t Lap)
applied exactly in Fourier space.

* Additive noise: i d_t psi + Lap psi = Gamma decouples across chaos
  indices; each coefficient follows its own Duhamel formula, accumulated
  per step with the midpoint rule
  psi(t+dt) = e^{i dt Lap} psi(t) - i dt e^{i (dt/2) Lap} Gamma(t + dt/2).

* Multiplicative noise: i d_t psi + Lap psi + psi <> Gamma = 0 couples
  degree levels triangularly.  Strang splitting multiplies the state by the
  truncated Wick exponential exp<>(i dt Gamma(., t_mid)) between free
  half-flows; under the transform that factor is exp(i dt HGamma(z)), a
  modulus-one multiplier whenever HGamma(z) is real, so the per-z flow is
  unitary up to truncation overflow.  Its degree-1 term is the midpoint
  cross-level source.  This realizes the 2-D beam-propagation (paraxial)
  model when run on a two-axis grid.

* Cubic: i d_t psi + Lap psi + (Gamma - psi <> psi*) <> psi = 0, with psi*
  the coefficient-wise conjugate field, Strang-split with a classical-RK4
  substep for the potential + triple-Wick-convolution part.
"""

from __future__ import annotations

import numpy as np

from ..chaos import ChaosField, field_to_stack
from ..grids import GridSpec
from ..multiindex import MultiIndex
from ..spectral import SpectralKernel
from .base import (
    NoiseSource,
    PropagatorHistory,
    conv_table,
    run_propagator,
    shift_pairs,
    stack_apply,
    stack_dealias,
    wick_conv_stack,
    wick_exp_degree1_stack,
)


def _check_horizon(source, T):
    if source is not None and np.isfinite(source.horizon) and T > source.horizon + 1e-12:
        raise ValueError(f"T={T} exceeds the noise time window {source.horizon}")


def solve_schrodinger_additive(
    noise: ChaosField | None,
    psi0: ChaosField,
    grid: GridSpec,
    T: float,
    dt: float,
    snapshot_every: int | None = None,
) -> PropagatorHistory:
    """Coefficient-wise Duhamel evolution for additive space-time noise.

    The noise may populate any chaos degree: there is no coupling between
    indices, so each coefficient is propagated freely and the forcing is
    accumulated by the midpoint rule.
    """
    index_set = psi0.index_set
    kern = SpectralKernel(grid)
    free_full = kern.schrodinger_multiplier(dt)
    free_half = kern.schrodinger_multiplier(0.5 * dt)
    source = NoiseSource(noise, grid, index_set) if noise is not None else None
    _check_horizon(source, T)
    positions = (
        [(index_set.position(a), a) for a in source.indices] if source is not None else []
    )

    def step(state, t, dt):
        state = stack_apply(state, free_full, grid)
        if source is not None:
            mid = t + 0.5 * dt
            for pos, alpha in positions:
                g = source.eval_index(alpha, mid)
                state[pos] -= 1j * dt * kern.apply_multiplier(
                    np.asarray(g, dtype=complex), free_half
                )
        return state, 0.0

    state = field_to_stack(psi0, dtype=complex)
    return run_propagator(
        "schrodinger-additive", state, index_set, grid, T, dt, step,
        tag=psi0.tag, snapshot_every=snapshot_every, params={},
    )


def solve_schrodinger_mult_wick(
    noise: ChaosField | None,
    psi0: ChaosField,
    grid: GridSpec,
    T: float,
    dt: float,
    snapshot_every: int | None = None,
    sup_bound: float | None = None,
) -> PropagatorHistory:
    """Quantized linear Schrodinger equation with multiplicative noise.

    Smoothed noise (gamma > 0) is the intended regime; the solver itself
    accepts whatever degree <= 1 field it is given.
    """
    index_set = psi0.index_set
    kern = SpectralKernel(grid)
    half = kern.schrodinger_multiplier(0.5 * dt)
    source = NoiseSource(noise, grid, index_set, max_degree=1) if noise is not None else None
    _check_horizon(source, T)
    table = conv_table(index_set) if source is not None else None

    def step(state, t, dt):
        state = stack_apply(state, half, grid)
        overflow = 0.0
        if source is not None:
            mid = t + 0.5 * dt
            eps = source.eval_eps(mid) if source.eps_entries else np.zeros((0,) + grid.shape)
            E = wick_exp_degree1_stack(
                eps, source.eps_entries, 1j * dt, index_set, zero_val=source.eval_zero(mid)
            )
            state, overflow = wick_conv_stack(E, state, table, grid)
        state = stack_apply(state, half, grid)
        return state, overflow

    state = field_to_stack(psi0, dtype=complex)
    return run_propagator(
        "schrodinger-mult", state, index_set, grid, T, dt, step,
        tag=psi0.tag, snapshot_every=snapshot_every, sup_bound=sup_bound, params={},
    )


def solve_nls_wick(
    noise: ChaosField | None,
    psi0: ChaosField,
    grid: GridSpec,
    T: float,
    dt: float,
    snapshot_every: int | None = None,
    sup_bound: float = 1e6,
) -> PropagatorHistory:
    """Quantized defocusing cubic Schrodinger equation.

    The gamma-component of the cubic term is the triple Wick convolution
    sum_{alpha+beta+delta=gamma} psi_alpha psi*_beta psi_delta, evaluated
    with 2/3-rule de-aliased nodal products; the potential substep runs
    classical RK4 between exact free half-flows.
    """
    index_set = psi0.index_set
    kern = SpectralKernel(grid)
    half = kern.schrodinger_multiplier(0.5 * dt)
    mask = kern.dealias_mask
    source = NoiseSource(noise, grid, index_set, max_degree=1) if noise is not None else None
    _check_horizon(source, T)
    table = conv_table(index_set)
    pairs, dropped = [], []
    if source is not None:
        from ..multiindex import unit_index

        for k in source.eps_entries:
            pairs.append((k, *shift_pairs(index_set, k)))
            eps = unit_index(k)
            dropped.append(
                np.asarray([i for i, alpha in enumerate(index_set)
                            if alpha + eps not in index_set])
            )

    def rhs(state, t):
        u = stack_dealias(state, mask, grid)
        pair, o1 = wick_conv_stack(u, np.conj(u), table, grid)
        pair = stack_dealias(pair, mask, grid)
        cubic, o2 = wick_conv_stack(pair, u, table, grid)
        out = -1j * cubic
        overflow = o1 + o2
        if source is not None:
            g0 = source.eval_zero(t)
            if g0 is not None:
                out += 1j * g0[None] * u
            if source.eps_entries:
                g = source.eval_eps(t)
                for col, (k, outs, ins) in enumerate(pairs):
                    out[outs] += 1j * g[col][None] * u[ins]
                    for i in dropped[col]:
                        overflow += grid.l2_norm(g[col] * u[i])
        return stack_dealias(out, mask, grid), overflow

    def step(state, t, dt):
        state = stack_apply(state, half, grid)
        k1, o1 = rhs(state, t)
        k2, o2 = rhs(state + 0.5 * dt * k1, t + 0.5 * dt)
        k3, o3 = rhs(state + 0.5 * dt * k2, t + 0.5 * dt)
        k4, o4 = rhs(state + dt * k3, t + dt)
        state = state + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        state = stack_apply(state, half, grid)
        overflow = dt * (o1 + 2 * o2 + 2 * o3 + o4) / 6
        return state, overflow

    state = field_to_stack(psi0, dtype=complex)
    return run_propagator(
        "nls", state, index_set, grid, T, dt, step,
        tag=psi0.tag, snapshot_every=snapshot_every, sup_bound=sup_bound, params={},
    )
