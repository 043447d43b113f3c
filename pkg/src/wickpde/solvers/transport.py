"""Wick-quantized linear transport on a 1-D periodic domain.

The quantized equation d_t u + Gamma <> d_x u + b d_x u = c u + d with a
degree-1 noise Gamma = g_0 + sum_k g_k H_{eps_k} matches coefficients into
the triangular system

    d_t u_gamma + sum_k a g_k d_x u_{gamma - eps_k} + (b + a g_0) d_x u_gamma
        = c u_gamma + d [gamma = 0],

solved pseudo-spectrally in x with classical RK4 in t.  All nodal products
are de-aliased by the 2/3 rule.  An advective CFL check on the total
characteristic speed runs up front; smoothing the noise is how callers keep
that speed (and hence the admissible dt) under control.

When the noise coefficients do not depend on x the transformed equation has
the exact characteristics solution phi(x - int_0^t HGamma(r, z) dr); that
closed form is exposed as an oracle for the chaos solver, valid at complex
z as well whenever the initial profile accepts complex arguments.
"""

from __future__ import annotations

import numpy as np

from ..chaos import ChaosField, field_to_stack
from ..grids import GridSpec
from ..multiindex import unit_index
from ..spectral import SpectralKernel
from .base import (
    CFLViolation,
    NoiseSource,
    PropagatorHistory,
    grid_dealias,
    run_propagator,
    shift_pairs,
    stack_dealias,
)

CFL_LIMIT = 2.8  # RK4 imaginary-axis stability reach


def _coefficient(fn, x, t):
    if fn is None:
        return None
    if callable(fn):
        return np.asarray(fn(x, t), dtype=float) * np.ones_like(x)
    return float(fn) * np.ones_like(x)


def solve_transport_wick(
    noise: ChaosField | None,
    phi0: ChaosField,
    grid: GridSpec,
    T: float,
    dt: float,
    a=None,
    b=None,
    c=None,
    d=None,
    snapshot_every: int | None = None,
    sup_bound: float | None = None,
) -> PropagatorHistory:
    """Evolve the chaos coefficients of the quantized transport equation.

    `noise` is a grid-valued field over (x, t) (or x only) of degree <= 1;
    a, b, c, d are optional deterministic coefficients, each a constant or
    a callable (x, t) -> array: `a` scales the noise, `b` is a drift, `c`
    a reaction coefficient and `d` a forcing entering the mean coefficient.
    """
    if grid.dim != 1:
        raise ValueError("transport solver is 1-D in space")
    index_set = phi0.index_set
    kern = SpectralKernel(grid)
    x = grid.axis_coords(0)
    ik = 1j * kern.k[0]
    if grid.shape[0] % 2 == 0:
        ik = ik.copy()
        ik[grid.shape[0] // 2] = 0.0
    mask = kern.dealias_mask

    source = NoiseSource(noise, grid, index_set, max_degree=1) if noise is not None else None
    if source is not None and np.isfinite(source.horizon) and T > source.horizon + 1e-12:
        raise ValueError(f"T={T} exceeds the noise time window {source.horizon}")
    pairs, dropped = [], []
    if source is not None:
        for k in source.eps_entries:
            outs, ins = shift_pairs(index_set, k)
            pairs.append((k, outs, ins))
            eps = unit_index(k)
            dropped.append(
                np.asarray([i for i, alpha in enumerate(index_set)
                            if alpha + eps not in index_set])
            )

    # Advective CFL on the worst-case characteristic speed.
    kmax = float(np.max(np.abs(kern.k[0])))
    speed = 0.0
    ts_probe = np.linspace(0.0, T, 9)
    for t in ts_probe:
        av = _coefficient(a, x, t)
        bv = _coefficient(b, x, t)
        s = float(np.max(np.abs(bv))) if bv is not None else 0.0
        if source is not None:
            amp = np.abs(av) if av is not None else 1.0
            g = source.eval_eps(t) if source.eps_entries else np.zeros((0,) + grid.shape)
            s += float(np.sum([np.max(np.abs(gk) * amp) for gk in g]))
            g0 = source.eval_zero(t)
            if g0 is not None:
                s += float(np.max(np.abs(g0) * amp))
        speed = max(speed, s)
    if speed * kmax * dt > CFL_LIMIT:
        raise CFLViolation(
            f"speed {speed:.3g} * kmax {kmax:.3g} * dt {dt:.3g} "
            f"= {speed * kmax * dt:.3g} > {CFL_LIMIT}"
        )

    def dx(stack):
        return np.fft.ifft(np.fft.fft(stack, axis=-1) * ik, axis=-1).real

    def rhs(state, t):
        du = stack_dealias(dx(state), mask, grid)
        out = np.zeros_like(state)
        overflow = 0.0
        av = _coefficient(a, x, t)
        bv = _coefficient(b, x, t)
        cv = _coefficient(c, x, t)
        dv = _coefficient(d, x, t)
        if source is not None:
            g0 = source.eval_zero(t)
            drift = None
            if g0 is not None:
                drift = g0 * (av if av is not None else 1.0)
            if bv is not None:
                drift = bv if drift is None else drift + bv
            if drift is not None:
                out -= grid_dealias(drift, mask)[None] * du
            if source.eps_entries:
                g = source.eval_eps(t)
                for col, (k, outs, ins) in enumerate(pairs):
                    gk = g[col] * (av if av is not None else 1.0)
                    gk = grid_dealias(gk, mask)
                    out[outs] -= gk[None] * du[ins]  # out positions are unique per k
                    for i in dropped[col]:
                        overflow += grid.l2_norm(gk * du[i])
        elif bv is not None:
            out -= grid_dealias(bv, mask)[None] * du
        if cv is not None:
            out += cv[None] * state
        if dv is not None:
            out[0] += dv  # position 0 is the zero index: forcing is deterministic
        return out, overflow

    def step(state, t, dt):
        k1, o1 = rhs(state, t)
        k2, o2 = rhs(state + 0.5 * dt * k1, t + 0.5 * dt)
        k3, o3 = rhs(state + 0.5 * dt * k2, t + 0.5 * dt)
        k4, o4 = rhs(state + dt * k3, t + dt)
        new = state + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        new = stack_dealias(new, mask, grid)
        return new, dt * (o1 + 2 * o2 + 2 * o3 + o4) / 6

    state = stack_dealias(field_to_stack(phi0), mask, grid)
    return run_propagator(
        "transport", state, index_set, grid, T, dt, step,
        tag=phi0.tag, snapshot_every=snapshot_every, sup_bound=sup_bound,
        params={"a": a is not None, "b": b is not None, "c": c is not None, "d": d is not None},
    )


def eval_transport_characteristic(
    x, t: float, z, noise: ChaosField, phi0, quad_order: int = 96
):
    """Closed-form transformed transport solution for x-independent noise.

    Returns phi0(x - int_0^t HGamma(r, z) dr) with the time integral done by
    Gauss-Legendre quadrature on the noise's trigonometric interpolant.
    Rejects noise whose coefficients vary over space (the closed form is
    only exact in that regime).
    """
    z = np.atleast_1d(np.asarray(z))
    source = NoiseSource(noise, noise.grid.spatial())
    scale = max((float(np.max(np.abs(v))) for v in noise.coeffs.values()), default=0.0)
    space_axes = tuple(i for i in range(noise.grid.dim) if noise.grid.roles[i] == "space")
    for v in noise.coeffs.values():
        if space_axes and float(np.max(np.ptp(v, axis=space_axes))) > 1e-10 * max(1.0, scale):
            raise ValueError("characteristics closed form needs x-independent noise")

    shift = 0.0
    if t != 0:
        nodes, weights = np.polynomial.legendre.leggauss(quad_order)
        r = 0.5 * t * (nodes + 1.0)
        w = 0.5 * t * weights
        for alpha in noise.coeffs:
            mono = 1.0
            for j, e in enumerate(alpha):
                if e:
                    mono = mono * z[j] ** e
            g_vals = np.array(
                [complex(np.asarray(source.eval_index(alpha, ri)).flat[0]) for ri in r]
            )
            shift = shift + mono * np.sum(w * g_vals)
    if abs(np.imag(shift)) < 1e-300:
        shift = np.real(shift)
    return phi0(np.asarray(x) - shift)
