"""White-noise and Brownian-sheet chaos fields, smoothing, path sampling.

The noise basis lives on R^d (d = space dimension, plus one when the noise
extends over time), but solvers compute on periodic boxes.  Each box axis
is mapped to the real line by an affine chart centered on the domain,

    y = (u - L/2) * (2 W / L),        W = sqrt(2 n_max) + 4,

where n_max is the largest 1-based Hermite-function order the truncated
basis uses on that axis.  The window W is where those functions have
decayed to ~1e-7, so the periodization error of the sampled basis is far
below every tolerance the noise feeds into, while low orders remain active
over a fixed fraction of the box regardless of box size.

A white-noise field is the degree-1 chaos field whose eps_k coefficient is
the sampled k-th tensor Hermite function; the Poisson variant carries the
same coefficients under the Charlier tag.  Brownian sheets integrate each
tensor factor from the physical origin (box center) with the signed-box
convention for negative coordinates.  Smoothing multiplies coefficients by
(1 + |k|^2)^{-gamma} in Fourier space over the declared axes.

Sampling uses the counter-based Philox generator, so identical seeds give
bit-identical paths and parallel sample batches are reproducible no matter
how they are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .chaos import BasisTag, ChaosField
from .grids import GridSpec
from .hermite import BasisEvaluator
from .multiindex import IndexSet, unit_index

GAUSSIAN = "gaussian"
POISSON = "poisson"


@dataclass(frozen=True)
class NoiseSpec:
    """Noise kind, parameter-space dimensions, truncation and seed."""

    kind: str = GAUSSIAN
    space_dim: int = 1
    time_extended: bool = False
    basis_count: int = 1
    gamma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in (GAUSSIAN, POISSON):
            raise ValueError(f"noise kind must be gaussian|poisson, got {self.kind!r}")
        if self.space_dim not in (1, 2):
            raise ValueError(f"space_dim must be 1 or 2, got {self.space_dim}")
        if self.basis_count < 1:
            raise ValueError(f"basis_count must be >= 1, got {self.basis_count}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")

    @property
    def param_dim(self) -> int:
        return self.space_dim + (1 if self.time_extended else 0)

    @property
    def tag(self) -> BasisTag:
        return BasisTag.GAUSSIAN_HERMITE if self.kind == GAUSSIAN else BasisTag.POISSON_CHARLIER


def hermite_window(n_max: int) -> float:
    """Half-width of the chart window for basis orders up to n_max."""
    return math.sqrt(2.0 * n_max) + 4.0


class NoiseBasis:
    """Chart-composed tensor Hermite basis of a noise spec on a grid."""

    def __init__(self, spec: NoiseSpec, grid: GridSpec):
        if grid.dim != spec.param_dim:
            raise ValueError(
                f"grid dim {grid.dim} does not match noise parameter dim {spec.param_dim}"
            )
        if (grid.time_axis is not None) != spec.time_extended:
            raise ValueError("grid time axis must match NoiseSpec.time_extended")
        self.spec = spec
        self.grid = grid
        self.evaluator = BasisEvaluator(spec.param_dim, spec.basis_count)
        self.windows = [hermite_window(n) for n in self.evaluator.max_order]
        self.scales = [
            2.0 * w / L for w, L in zip(self.windows, grid.lengths)
        ]
        self.centers = [L / 2.0 for L in grid.lengths]

    def chart(self, axis: int, u) -> np.ndarray:
        """Box coordinate -> physical coordinate on the given axis."""
        return (np.asarray(u, dtype=float) - self.centers[axis]) * self.scales[axis]

    def chart_coords(self) -> list[np.ndarray]:
        return [self.chart(i, self.grid.axis_coords(i)) for i in range(self.grid.dim)]

    def eta_grid(self, k: int) -> np.ndarray:
        """eta_k sampled on the full grid (k is 1-based)."""
        return self.evaluator.eta_grid(k, self.chart_coords())

    def eta_points(self, k: int, box_points: np.ndarray) -> np.ndarray:
        """eta_k at scattered box-coordinate points of shape (..., dim)."""
        pts = np.asarray(box_points, dtype=float)
        phys = np.stack(
            [self.chart(i, pts[..., i]) for i in range(self.grid.dim)], axis=-1
        )
        return self.evaluator.eta_points(k, phys)

    @property
    def physical_cell_volume(self) -> float:
        vol = self.grid.cell_volume
        for s in self.scales:
            vol *= s
        return vol


def white_noise_field(spec: NoiseSpec, grid: GridSpec) -> ChaosField:
    """Degree-1 chaos field with eps_k coefficient = sampled eta_k.

    The Gaussian and Poisson variants share coefficients and differ only in
    the basis tag (the two orthogonal systems correspond coefficient-wise).
    """
    basis = NoiseBasis(spec, grid)
    index_set = IndexSet(1, spec.basis_count)
    coeffs = {unit_index(k): basis.eta_grid(k) for k in range(1, spec.basis_count + 1)}
    return ChaosField(index_set, coeffs, spec.tag, grid)


def brownian_sheet_field(spec: NoiseSpec, grid: GridSpec) -> ChaosField:
    """Chaos expansion of the Brownian sheet on the chart-mapped box.

    The eps_k coefficient at a node is the product over axes of the signed
    integral of the k-th tensor factor from the physical origin to the
    node's physical coordinate; the zero-degree coefficient vanishes.
    """
    if spec.kind != GAUSSIAN:
        raise ValueError("Brownian sheet construction is Gaussian-only")
    basis = NoiseBasis(spec, grid)
    coords = basis.chart_coords()
    index_set = IndexSet(1, spec.basis_count)
    coeffs = {}
    for k in range(1, spec.basis_count + 1):
        factors = basis.evaluator.eta_axes(k, coords)
        integrated = []
        for axis, f in enumerate(factors):
            y = coords[axis]
            prim = cumulative_trapezoid(f, y, initial=0.0)
            center = grid.shape[axis] // 2  # node at physical 0 (power-of-two grid)
            integrated.append(prim - prim[center])
        out = integrated[0]
        for g in integrated[1:]:
            out = np.multiply.outer(out, g)
        coeffs[unit_index(k)] = out
    return ChaosField(index_set, coeffs, spec.tag, grid)


def smooth(F: ChaosField, gamma: float, axes: tuple[int, ...] | None = None) -> ChaosField:
    """Apply (I - Laplacian)^{-gamma} over the given axes (default: all).

    Acts coefficient-wise as the Fourier multiplier (1 + |k|^2)^{-gamma};
    gamma = 0 is the identity.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if gamma == 0 or not F.coeffs:
        return F
    if not F.is_grid_valued:
        raise ValueError("smoothing applies to grid-valued fields")
    grid = F.grid
    if axes is None:
        axes = tuple(range(grid.dim))
    ksq = np.zeros(grid.shape)
    for ax in axes:
        k = grid.wavenumbers(ax)
        shape = [1] * grid.dim
        shape[ax] = len(k)
        ksq = ksq + (k**2).reshape(shape)
    mult = (1.0 + ksq) ** (-gamma)
    out = {}
    for alpha, v in F.coeffs.items():
        sm = np.fft.ifftn(np.fft.fftn(v, axes=axes) * mult, axes=axes)
        out[alpha] = sm if np.iscomplexobj(v) else sm.real
    return ChaosField(F.index_set, out, F.tag, grid)


def sample_path(spec: NoiseSpec, grid: GridSpec):
    """Draw one noise realization; returns (draws, realized grid function).

    Gaussian: draws are i.i.d. standard normals xi_1..xi_N and the realized
    noise is sum_k xi_k eta_k on the grid (exactly the pathwise evaluation
    of the white-noise chaos field).  Poisson: draws are per-cell counts
    with unit rate density in physical coordinates and the realized
    compensated noise is (counts - cell volume) / cell volume.
    """
    rng = np.random.Generator(np.random.Philox(key=spec.seed))
    if spec.kind == GAUSSIAN:
        basis = NoiseBasis(spec, grid)
        xi = rng.standard_normal(spec.basis_count)
        realized = np.zeros(grid.shape)
        for k in range(1, spec.basis_count + 1):
            realized += xi[k - 1] * basis.eta_grid(k)
        return xi, realized
    basis = NoiseBasis(spec, grid)
    vol = basis.physical_cell_volume
    counts = rng.poisson(lam=vol, size=grid.shape).astype(float)
    realized = (counts - vol) / vol
    return counts, realized


def sample_batch_seeds(seed: int, n_blocks: int) -> list[np.random.SeedSequence]:
    """Deterministic per-block seed sequences for parallel sampling."""
    return np.random.SeedSequence(seed).spawn(n_blocks)


def dump_grid_csv(path, grid: GridSpec, values: np.ndarray) -> None:
    """Dump a realized path (or any grid function) as coordinate/value rows."""
    import csv

    values = np.asarray(values)
    if values.shape != grid.shape:
        raise ValueError(f"values shape {values.shape} != grid shape {grid.shape}")
    coords = [grid.axis_coords(i) for i in range(grid.dim)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"{r}{i}" for i, r in enumerate(grid.roles)] + ["value"])
        for idx in np.ndindex(grid.shape):
            writer.writerow(
                [repr(float(coords[i][idx[i]])) for i in range(grid.dim)]
                + [repr(float(values[idx]))]
            )
