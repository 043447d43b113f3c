"""Shared propagator machinery for the Wick-quantized solvers.

Quantizing an equation whose noise is a degree-1 chaos field couples the
coefficient at gamma only to coefficients at gamma - eps_k, so the
deterministic system for the chaos coefficients is triangular in the total
degree.  Solvers evolve all coefficients as one stacked array of shape
(len(index_set), *grid.shape); the coupling patterns (index shifts for
degree-1 noise, full convolution tables for genuinely nonlinear terms) are
precomputed once per solve.

Wick-convolution terms whose output index falls outside the truncation are
dropped; every solver accumulates their mass sum ||a_alpha * b_beta|| into
a truncation-overflow diagnostic that is stored with the history and
exported with the manifest.

Noise enters as a grid-valued ChaosField over (x[, t]).  Coefficients are
evaluated at arbitrary times through the trigonometric interpolant of the
periodic time axis (exact for the band-limited samples the noise module
produces), so RK4 stages and midpoint kicks never need the solver steps to
align with the noise grid.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from ..chaos import BasisTag, ChaosField, load_chaos_field, save_chaos_field, stack_to_field
from ..grids import GridSpec
from ..multiindex import IndexSet, MultiIndex, ZERO_INDEX, unit_index


class CFLViolation(ValueError):
    """Time step too large for the advective stability limit."""


@dataclass
class PropagatorHistory:
    """Snapshots and diagnostics of one chaos-coefficient solve."""

    equation: str
    index_set: IndexSet
    grid: GridSpec
    dt: float
    times: list[float] = field(default_factory=list)
    snapshots: list[ChaosField] = field(default_factory=list)
    overflow: list[float] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    aborted: bool = False
    abort_reason: str | None = None

    @property
    def final(self) -> ChaosField:
        return self.snapshots[-1]

    @property
    def final_time(self) -> float:
        return self.times[-1]

    @property
    def total_overflow(self) -> float:
        return self.overflow[-1] if self.overflow else 0.0


def n_steps_for(T: float, dt: float) -> int:
    """Number of steps covering [0, T]; T must be a multiple of dt."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    n = round(T / dt)
    if abs(n * dt - T) > 1e-9 * max(1.0, abs(T)):
        raise ValueError(f"T={T} is not an integer multiple of dt={dt}")
    return n


def run_propagator(
    equation: str,
    state: np.ndarray,
    index_set: IndexSet,
    grid: GridSpec,
    T: float,
    dt: float,
    step,
    tag: BasisTag = BasisTag.GAUSSIAN_HERMITE,
    snapshot_every: int | None = None,
    sup_bound: float | None = None,
    params: dict | None = None,
) -> PropagatorHistory:
    """Drive `step(state, t, dt) -> (state, overflow_increment)` over [0, T].

    Snapshots are recorded at t = 0, every `snapshot_every` steps and at the
    final time.  When a sup-norm guard is set and tripped, the run stops and
    the partial history is returned with the abort flag set.
    """
    n = n_steps_for(T, dt)
    hist = PropagatorHistory(equation, index_set, grid, dt, params=params or {})

    def record(t, overflow):
        hist.times.append(t)
        hist.snapshots.append(stack_to_field(state, index_set, grid, tag))
        hist.overflow.append(overflow)

    overflow = 0.0
    record(0.0, overflow)
    for i in range(n):
        t = i * dt
        state, extra = step(state, t, dt)
        overflow += extra
        t_next = (i + 1) * dt
        if sup_bound is not None and not np.all(np.abs(state) <= sup_bound):
            hist.aborted = True
            hist.abort_reason = (
                f"sup-norm guard tripped at t={t_next:.6g}: "
                f"max |coefficient| = {float(np.max(np.abs(state))):.3e} > {sup_bound:.3e}"
            )
            record(t_next, overflow)
            return hist
        if not np.all(np.isfinite(state)):
            hist.aborted = True
            hist.abort_reason = f"non-finite state at t={t_next:.6g}"
            record(t_next, overflow)
            return hist
        is_last = i == n - 1
        if is_last or (snapshot_every is not None and (i + 1) % snapshot_every == 0):
            record(t_next, overflow)
    return hist


# -- stacked-array spectral helpers ----------------------------------------


def stack_apply(state: np.ndarray, mult: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Apply a Fourier multiplier over the grid axes of a stacked state."""
    axes = tuple(range(1, grid.dim + 1))
    out = np.fft.ifftn(np.fft.fftn(state, axes=axes) * mult[None], axes=axes)
    if not np.iscomplexobj(state) and not np.iscomplexobj(mult):
        return out.real
    return out


def stack_dealias(state: np.ndarray, mask: np.ndarray, grid: GridSpec) -> np.ndarray:
    axes = tuple(range(1, grid.dim + 1))
    out = np.fft.ifftn(np.fft.fftn(state, axes=axes) * mask[None], axes=axes)
    return out.real if not np.iscomplexobj(state) else out


def grid_dealias(u: np.ndarray, mask: np.ndarray) -> np.ndarray:
    out = np.fft.ifftn(np.fft.fftn(u) * mask)
    return out.real if not np.iscomplexobj(u) else out


# -- noise evaluation --------------------------------------------------------


class NoiseSource:
    """Arbitrary-time evaluation of a gridded noise field's coefficients.

    The noise grid must extend the solver's spatial grid; a trailing time
    axis, when present, is evaluated by the exact trigonometric interpolant
    of the sampled data (cached FFT along time).  Without a time axis the
    coefficients are constants in t.
    """

    def __init__(self, noise: ChaosField, space_grid: GridSpec,
                 index_set: IndexSet | None = None, max_degree: int | None = None):
        if not noise.is_grid_valued:
            raise ValueError("noise must be a grid-valued chaos field")
        ngrid = noise.grid
        sp = ngrid.spatial()
        if sp.shape != space_grid.shape or sp.lengths != space_grid.lengths:
            raise ValueError(
                f"noise spatial grid {sp.shape}x{sp.lengths} does not match "
                f"solver grid {space_grid.shape}x{space_grid.lengths}"
            )
        if index_set is not None:
            for alpha in noise.coeffs:
                if alpha not in index_set:
                    raise ValueError(f"noise index {alpha!r} outside solver {index_set!r}")
        if max_degree is not None:
            for alpha in noise.coeffs:
                if alpha.degree > max_degree:
                    raise ValueError(
                        f"noise index {alpha!r} exceeds supported degree {max_degree}"
                    )
        self.grid = ngrid
        self.space_grid = space_grid
        self.time_axis = ngrid.time_axis
        self.horizon = ngrid.lengths[self.time_axis] if self.time_axis is not None else np.inf
        self._complex = noise.is_complex
        self._fft: dict[MultiIndex, np.ndarray] = {}
        self._const: dict[MultiIndex, np.ndarray] = {}
        if self.time_axis is not None:
            nt = ngrid.shape[self.time_axis]
            self._omega = 2.0 * np.pi * np.fft.fftfreq(nt, d=1.0 / nt) / self.horizon
            self._nt = nt
            for alpha, v in noise.coeffs.items():
                self._fft[alpha] = np.fft.fft(v, axis=-1)
        else:
            for alpha, v in noise.coeffs.items():
                self._const[alpha] = v
        self.indices = sorted(noise.coeffs, key=lambda a: a.grlex_key())
        self.eps_entries = sorted(
            a.dims for a in self.indices if a.degree == 1 and a == unit_index(a.dims)
        )
        self.has_zero = ZERO_INDEX in noise.coeffs

    def eval_index(self, alpha: MultiIndex, t: float) -> np.ndarray:
        if self.time_axis is None:
            return self._const[alpha]
        phases = np.exp(1j * self._omega * t) / self._nt
        out = self._fft[alpha] @ phases
        return out if self._complex else out.real

    def eval_eps(self, t: float) -> np.ndarray:
        """Degree-1 coefficients stacked in eps_entries order, shape (n, *space)."""
        return np.stack([self.eval_index(unit_index(k), t) for k in self.eps_entries])

    def eval_zero(self, t: float) -> np.ndarray | None:
        return self.eval_index(ZERO_INDEX, t) if self.has_zero else None

    def max_abs(self) -> float:
        """Largest coefficient magnitude over the sampled noise data."""
        vals = list(self._const.values()) or [np.fft.ifft(v, axis=-1) for v in self._fft.values()]
        return max(float(np.max(np.abs(v))) for v in vals) if vals else 0.0


# -- Wick coupling tables ------------------------------------------------


def shift_pairs(index_set: IndexSet, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Positions (out, in) with members[out] = members[in] + eps_k."""
    eps = unit_index(k)
    outs, ins = [], []
    for i, alpha in enumerate(index_set):
        gamma = alpha + eps
        if gamma in index_set:
            outs.append(index_set.position(gamma))
            ins.append(i)
    return np.asarray(outs), np.asarray(ins)


def conv_table(index_set: IndexSet):
    """All triples (out, ia, ib) with members[ia] + members[ib] = members[out],
    plus the list of (ia, ib) pairs whose sum leaves the truncation."""
    inside, outside = [], []
    for ia, alpha in enumerate(index_set):
        for ib, beta in enumerate(index_set):
            gamma = alpha + beta
            if gamma in index_set:
                inside.append((index_set.position(gamma), ia, ib))
            else:
                outside.append((ia, ib))
    return inside, outside


def wick_conv_stack(A: np.ndarray, B: np.ndarray, table, grid: GridSpec,
                    track_overflow: bool = True) -> tuple[np.ndarray, float]:
    """Stacked Wick convolution with pointwise nodal products.

    Returns (C, overflow) with C[out] = sum A[ia] * B[ib] over in-set triples
    and overflow = sum of grid L2 norms of the dropped products.
    """
    inside, outside = table
    dtype = np.result_type(A.dtype, B.dtype)
    C = np.zeros_like(A, dtype=dtype)
    for out, ia, ib in inside:
        C[out] += A[ia] * B[ib]
    overflow = 0.0
    if track_overflow:
        for ia, ib in outside:
            prod = A[ia] * B[ib]
            overflow += grid.l2_norm(prod)
    return C, overflow


def wick_exp_degree1_stack(
    eps_vals: np.ndarray,
    eps_entries: list[int],
    scale: complex,
    index_set: IndexSet,
    zero_val: np.ndarray | None = None,
) -> np.ndarray:
    """Stacked truncated Wick exponential of a degree <= 1 noise slice.

    For G = g_0 + sum_k g_k H_{eps_k} the exponential's coefficient at alpha
    is exp(scale g_0) * prod_k (scale g_k)^{alpha_k} / alpha_k!, supported on
    the noise's dimensions; all other coefficients vanish.
    """
    shape = eps_vals.shape[1:]
    dtype = complex if (np.iscomplexobj(eps_vals) or isinstance(scale, complex)) else float
    E = np.zeros((len(index_set),) + shape, dtype=dtype)
    scaled = scale * eps_vals
    col = {k: i for i, k in enumerate(eps_entries)}
    for pos, alpha in enumerate(index_set):
        term = None
        ok = True
        for j, e in enumerate(alpha, start=1):
            if e == 0:
                continue
            if j not in col:
                ok = False
                break
            piece = scaled[col[j]] ** e
            term = piece if term is None else term * piece
        if not ok:
            continue
        if term is None:
            E[pos] = 1.0
        else:
            E[pos] = term / float(alpha.factorial())
    if zero_val is not None:
        E *= np.exp(scale * zero_val)[None]
    return E


# -- Lawson (integrating-factor) RK4 -----------------------------------------


def lawson_rk4_step(state: np.ndarray, t: float, dt: float,
                    half_mult: np.ndarray, full_mult: np.ndarray,
                    nonlin, grid: GridSpec) -> tuple[np.ndarray, float]:
    """One classical-RK4 step of u' = L u + N(u, t) with exact e^{tL}.

    half_mult/full_mult are the Fourier multipliers of e^{L dt/2} and
    e^{L dt}; N returns (value, overflow).  Overflow increments are combined
    with the RK4 quadrature weights so the diagnostic approximates the time
    integral of the dropped-term mass.
    """
    k1, o1 = nonlin(state, t)
    s_half = stack_apply(state, half_mult, grid)
    k2, o2 = nonlin(s_half + (dt / 2) * stack_apply(k1, half_mult, grid), t + dt / 2)
    k3, o3 = nonlin(s_half + (dt / 2) * k2, t + dt / 2)
    s_full = stack_apply(state, full_mult, grid)
    k4, o4 = nonlin(s_full + dt * stack_apply(k3, half_mult, grid), t + dt)
    new = s_full + (dt / 6) * (
        stack_apply(k1, full_mult, grid)
        + 2 * stack_apply(k2 + k3, half_mult, grid)
        + k4
    )
    overflow = dt * (o1 + 2 * o2 + 2 * o3 + o4) / 6
    return new, overflow


# -- history export -----------------------------------------------------------


def export_history(hist: PropagatorHistory, out_dir) -> list[str]:
    """Write per-snapshot chaos-field files plus a key-value manifest.

    Returns the list of file names written (manifest last).
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    lines = [
        f"equation = {hist.equation}",
        f"dt = {hist.dt!r}",
        f"chaos.k = {hist.index_set.max_degree}",
        f"chaos.n = {hist.index_set.max_dims}",
        f"grid = {hist.grid.to_text()}",
        f"aborted = {str(hist.aborted).lower()}",
    ]
    if hist.abort_reason:
        lines.append(f"abort_reason = {hist.abort_reason}")
    for key in sorted(hist.params):
        lines.append(f"param.{key} = {hist.params[key]}")
    for i, (t, snap, ov) in enumerate(zip(hist.times, hist.snapshots, hist.overflow)):
        name = f"snapshot_{i:04d}.cf"
        save_chaos_field(snap, os.path.join(out_dir, name))
        written.append(name)
        lines.append(f"snapshot.{i}.time = {t!r}")
        lines.append(f"snapshot.{i}.file = {name}")
        lines.append(f"snapshot.{i}.overflow = {ov!r}")
    manifest = os.path.join(out_dir, "history.txt")
    with open(manifest, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    written.append("history.txt")
    return written


def load_history(out_dir) -> PropagatorHistory:
    path = os.path.join(out_dir, "history.txt")
    kv: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            if " = " in line:
                key, val = line.rstrip("\n").split(" = ", 1)
                kv[key] = val
    index_set = IndexSet(int(kv["chaos.k"]), int(kv["chaos.n"]))
    grid = GridSpec.from_text(kv["grid"])
    hist = PropagatorHistory(kv["equation"], index_set, grid, float(kv["dt"]))
    hist.aborted = kv.get("aborted") == "true"
    hist.abort_reason = kv.get("abort_reason")
    hist.params = {
        key[len("param."):]: val for key, val in kv.items() if key.startswith("param.")
    }
    i = 0
    while f"snapshot.{i}.file" in kv:
        hist.times.append(float(kv[f"snapshot.{i}.time"]))
        hist.overflow.append(float(kv[f"snapshot.{i}.overflow"]))
        hist.snapshots.append(load_chaos_field(os.path.join(out_dir, kv[f"snapshot.{i}.file"])))
        i += 1
    return hist
