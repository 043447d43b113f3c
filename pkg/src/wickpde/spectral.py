"""Shared FFT machinery: derivatives, Hilbert transform, flow multipliers.

All solvers differentiate and propagate stiff linear parts in Fourier
space on periodic power-of-two grids.  The SpectralKernel caches the
wavenumber meshes, the 2/3-rule de-aliasing mask and the exact one-step
multipliers of the linear flows (heat semigroup, free Schrodinger flow,
third-derivative and Benjamin-Ono dispersion).  Multipliers are pure
functions of the GridSpec, so they regenerate bit-identically.

The Hilbert transform uses the principal-value kernel normalization
H f(x) = PV (1/pi) integral f(y)/(x - y) dy, i.e. the Fourier multiplier
-i sign(k) in the numpy transform convention, with sign(0) = 0 (the mean
maps to zero) and the unpaired Nyquist mode zeroed to keep real fields
real.  With this sign H[cos(kx)] = sin(kx) for k > 0 and H[H[f]] =
-(f - mean f).
"""

from __future__ import annotations

import numpy as np

from .grids import GridSpec


class SpectralKernel:
    """Cached wavenumbers and semigroup multipliers for one spatial grid."""

    def __init__(self, grid: GridSpec):
        if grid.time_axis is not None:
            raise ValueError("spectral kernels act on spatial grids")
        self.grid = grid
        self.axes = tuple(range(grid.dim))
        self.k = [grid.wavenumbers(i) for i in self.axes]
        self.k_mesh = []
        for i in self.axes:
            shape = [1] * grid.dim
            shape[i] = grid.shape[i]
            self.k_mesh.append(self.k[i].reshape(shape))
        self.ksq = sum(km**2 for km in self.k_mesh)
        self.dealias_mask = self._build_dealias()

    def _build_dealias(self) -> np.ndarray:
        mask = np.ones(self.grid.shape, dtype=bool)
        for i in self.axes:
            n = self.grid.shape[i]
            cutoff = n // 3  # keep |mode| <= n/3: the 2/3 rule
            modes = np.fft.fftfreq(n, d=1.0 / n)
            keep = np.abs(modes) <= cutoff
            shape = [1] * self.grid.dim
            shape[i] = n
            mask &= keep.reshape(shape)
        return mask

    # -- transforms -------------------------------------------------------

    def fft(self, u: np.ndarray) -> np.ndarray:
        return np.fft.fftn(u, axes=self.axes)

    def ifft(self, u_hat: np.ndarray, real: bool = False) -> np.ndarray:
        out = np.fft.ifftn(u_hat, axes=self.axes)
        return out.real if real else out

    def apply_multiplier(self, u: np.ndarray, mult: np.ndarray) -> np.ndarray:
        out = self.ifft(self.fft(u) * mult)
        return out.real if not np.iscomplexobj(u) and not np.iscomplexobj(mult) else out

    def dealias(self, u: np.ndarray) -> np.ndarray:
        """Zero all modes above 2/3 of the resolved band."""
        out = self.ifft(self.fft(u) * self.dealias_mask)
        return out.real if not np.iscomplexobj(u) else out

    # -- linear flow multipliers ----------------------------------------

    def heat_multiplier(self, diffusivity: float, dt: float) -> np.ndarray:
        """exp(dt * diffusivity * Laplacian)."""
        return np.exp(-diffusivity * self.ksq * dt)

    def schrodinger_multiplier(self, dt: float) -> np.ndarray:
        """exp(i dt Laplacian), the free flow of psi_t = i Laplacian psi."""
        return np.exp(-1j * self.ksq * dt)

    def airy_multiplier(self, dt: float) -> np.ndarray:
        """One-step multiplier of u_t + u_xxx = 0: exp(i k^3 dt) (1-D)."""
        if self.grid.dim != 1:
            raise ValueError("third-derivative flow is 1-D")
        return np.exp(1j * self.k[0] ** 3 * dt)

    def benjamin_ono_multiplier(self, dt: float) -> np.ndarray:
        """One-step multiplier of u_t + H[u_xx] = 0: exp(-i k |k| dt) (1-D)."""
        if self.grid.dim != 1:
            raise ValueError("Benjamin-Ono dispersion is 1-D")
        return np.exp(-1j * self.k[0] * np.abs(self.k[0]) * dt)


def spectral_derivative(u: np.ndarray, grid: GridSpec, order: int = 1, axis: int = 0) -> np.ndarray:
    """(d/dx)^order along one axis by the FFT multiplier (ik)^order.

    For odd orders the unpaired Nyquist mode is zeroed, which keeps real
    inputs real and matches the symmetric trigonometric interpolant.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"derivative order must be 1, 2 or 3, got {order}")
    k = grid.wavenumbers(axis)
    mult = (1j * k) ** order
    if order % 2 == 1 and grid.shape[axis] % 2 == 0:
        mult[grid.shape[axis] // 2] = 0.0
    shape = [1] * grid.dim
    shape[axis] = len(k)
    out = np.fft.ifft(np.fft.fft(u, axis=axis) * mult.reshape(shape), axis=axis)
    return out.real if not np.iscomplexobj(u) else out


def hilbert_transform(u: np.ndarray, grid: GridSpec, axis: int = 0) -> np.ndarray:
    """Periodic Hilbert transform, PV-kernel normalization (see module doc)."""
    n = grid.shape[axis]
    modes = np.fft.fftfreq(n, d=1.0 / n)
    sgn = np.sign(modes)
    if n % 2 == 0:
        sgn[n // 2] = 0.0  # unpaired Nyquist: treated like the zero mode
    mult = -1j * sgn
    shape = [1] * grid.dim
    shape[axis] = n
    out = np.fft.ifft(np.fft.fft(u, axis=axis) * mult.reshape(shape), axis=axis)
    return out.real if not np.iscomplexobj(u) else out
