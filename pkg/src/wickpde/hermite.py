"""Hermite polynomials, Hermite functions and tensor bases of L2(R^d).

Conventions (1-based for functions, 0-based for polynomials):

* h_n is the probabilists' Hermite polynomial, h_0 = 1, h_1 = x,
  h_{n+1}(x) = x h_n(x) - n h_{n-1}(x).
* zeta_n, n >= 1, is the orthonormal Hermite function
  zeta_n(x) = pi^{-1/4} ((n-1)!)^{-1/2} e^{-x^2/2} h_{n-1}(sqrt(2) x),
  evaluated through the normalized recurrence
  zeta_{n+1} = x sqrt(2/n) zeta_n - sqrt((n-1)/n) zeta_{n-1},
  which is stable well past n = 200 (no explicit factorials).
* The d-dimensional tensor basis eta_j, j >= 1, attaches the j-th
  d-dimensional multi-index alpha^{(j)} in graded-lex order and sets
  eta_j(x) = prod_i zeta_{alpha^{(j)}_i + 1}(x_i); the +1 shift reconciles
  the 0-based multi-index entries with the 1-based zeta numbering.

First-order Charlier functionals (the Poisson-side analogue) are evaluated
from their generating function: C_0 = 1 and C_{eps_k} = <omega, eta_k> -
integral of eta_k.  Higher orders are intentionally unsupported; Poisson
fields are manipulated coefficient-wise through the Gaussian-Poisson
correspondence instead.
"""

from __future__ import annotations

import math

import numpy as np

from .multiindex import MultiIndex, leading_indices

SQRT2 = math.sqrt(2.0)
PI_QUARTER = math.pi ** -0.25


def hermite_poly(n: int, x):
    """Probabilists' Hermite polynomial h_n(x) by three-term recurrence."""
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    x = np.asarray(x, dtype=float) if not np.isscalar(x) else x
    h_prev = np.ones_like(x) if not np.isscalar(x) else 1.0
    if n == 0:
        return h_prev
    h = x * 1.0
    for m in range(1, n):
        h, h_prev = x * h - m * h_prev, h
    return h


def hermite_poly_table(n_max: int, x: np.ndarray) -> np.ndarray:
    """Stacked h_0(x) ... h_{n_max}(x), shape (n_max + 1, len(x))."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for m in range(1, n_max):
        out[m + 1] = x * out[m] - m * out[m - 1]
    return out


def hermite_fn(n: int, x):
    """Orthonormal Hermite function zeta_n(x), n >= 1."""
    if n < 1:
        raise ValueError(f"Hermite function order must be >= 1, got {n}")
    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=float)
    val = hermite_fn_table(n, x)[n - 1]
    return float(val) if scalar else val


def hermite_fn_table(n_max: int, x: np.ndarray) -> np.ndarray:
    """Stacked zeta_1(x) ... zeta_{n_max}(x), shape (n_max, len(x))."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max,) + x.shape)
    out[0] = PI_QUARTER * np.exp(-0.5 * x * x)
    if n_max >= 2:
        out[1] = SQRT2 * x * out[0]
    for n in range(2, n_max):
        # zeta index n+1 corresponds to row n; recurrence order j = n.
        out[n] = x * math.sqrt(2.0 / n) * out[n - 1] - math.sqrt((n - 1) / n) * out[n - 2]
    return out


def charlier_low(alpha: MultiIndex, pairing: float = 0.0, compensator: float = 0.0) -> float:
    """First-order Charlier functional value.

    C_0 = 1; for |alpha| = 1, the first theta-derivative of the generating
    function at theta = 0 gives <omega, eta_k> minus the compensator
    integral of eta_k.  Orders |alpha| >= 2 are rejected.
    """
    alpha = MultiIndex(alpha)
    if alpha.degree == 0:
        return 1.0
    if alpha.degree == 1:
        return float(pairing) - float(compensator)
    raise ValueError(f"Charlier functionals supported only for |alpha| <= 1, got {alpha!r}")


class BasisEvaluator:
    """Tensor Hermite basis eta_1, eta_2, ... of L2(R^d) with cached tables.

    The evaluator pins the multi-index enumeration once, so eta_j means the
    same function for every caller; 1-D zeta tables are cached per distinct
    coordinate array.
    """

    def __init__(self, dim: int, n_basis: int):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        if n_basis < 1:
            raise ValueError(f"n_basis must be >= 1, got {n_basis}")
        self.dim = dim
        self.n_basis = n_basis
        self.indices = leading_indices(dim, n_basis)
        # zeta order needed on axis i: largest entry there, +1 shift.
        self.max_order = [
            max(a.entry(i + 1) for a in self.indices) + 1 for i in range(dim)
        ]
        self._tables: dict = {}

    def _axis_index(self, j: int, axis: int) -> int:
        if not 1 <= j <= self.n_basis:
            raise IndexError(f"basis position {j} outside precomputed range 1..{self.n_basis}")
        return self.indices[j - 1].entry(axis + 1)

    def table(self, axis: int, coords: np.ndarray) -> np.ndarray:
        """zeta_1..zeta_{max_order[axis]} sampled at coords (cached)."""
        coords = np.asarray(coords, dtype=float)
        key = (axis, coords.shape, coords.tobytes())
        tab = self._tables.get(key)
        if tab is None:
            tab = hermite_fn_table(self.max_order[axis], coords)
            self._tables[key] = tab
        return tab

    def eta_axes(self, j: int, axes_coords: list[np.ndarray]) -> list[np.ndarray]:
        """Per-axis 1-D factors of eta_j on the given coordinate arrays."""
        return [
            self.table(i, axes_coords[i])[self._axis_index(j, i)]
            for i in range(self.dim)
        ]

    def eta_grid(self, j: int, axes_coords: list[np.ndarray]) -> np.ndarray:
        """eta_j on the tensor grid spanned by per-axis coordinates."""
        factors = self.eta_axes(j, axes_coords)
        out = factors[0]
        for f in factors[1:]:
            out = np.multiply.outer(out, f)
        return out

    def eta_points(self, j: int, points: np.ndarray) -> np.ndarray:
        """eta_j at scattered points, shape (..., dim) -> (...)."""
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.dim:
            raise ValueError(f"points last axis must be {self.dim}, got {points.shape}")
        out = np.ones(points.shape[:-1])
        for i in range(self.dim):
            order = self._axis_index(j, i)
            out = out * hermite_fn_table(order + 1, points[..., i])[order]
        return out


def tensor_eta(j: int, x, dim: int | None = None):
    """eta_j evaluated at a single point x in R^d (d inferred from x)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = dim if dim is not None else x.shape[-1]
    ev = BasisEvaluator(d, j)
    return float(ev.eta_points(j, x.reshape(-1, d))[0])


def dump_basis_csv(path, x: np.ndarray, n_max: int) -> None:
    """Debug dump of the 1-D function table: columns x, zeta_1(x), ..., zeta_n(x)."""
    import csv

    x = np.asarray(x, dtype=float)
    tab = hermite_fn_table(n_max, x)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x"] + [f"zeta_{n}" for n in range(1, n_max + 1)])
        for i, xi in enumerate(x):
            writer.writerow([repr(float(xi))] + [repr(float(tab[n][i])) for n in range(n_max)])
