"""Uniform periodic grids for PDE states and noise fields.

A GridSpec describes a 1-D or 2-D (optionally plus a time axis) periodic
box: node counts per axis (powers of two, FFT-friendly), axis lengths and
axis roles.  Node j on an axis of length L with n nodes sits at j * L / n;
the last node is one step short of the period, as usual for FFT grids.

Grid functions are plain numpy arrays with shape == grid.shape; the grid
object carries the geometry (steps, wavenumbers, cell volume, L2 norms).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VALID_ROLES = ("space", "time")


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Periodic tensor grid: node counts, box lengths, axis roles."""

    shape: tuple[int, ...]
    lengths: tuple[float, ...]
    roles: tuple[str, ...] = ()

    def __post_init__(self):
        shape = tuple(int(n) for n in self.shape)
        lengths = tuple(float(l) for l in self.lengths)
        roles = tuple(self.roles) if self.roles else ("space",) * len(shape)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "roles", roles)
        if not (len(shape) == len(lengths) == len(roles)):
            raise ValueError("shape, lengths and roles must have equal length")
        if not shape:
            raise ValueError("grid needs at least one axis")
        for n in shape:
            if not _is_power_of_two(n):
                raise ValueError(f"node counts must be powers of two, got {n}")
        for l in lengths:
            if l <= 0:
                raise ValueError(f"axis lengths must be positive, got {l}")
        for r in roles:
            if r not in VALID_ROLES:
                raise ValueError(f"axis role must be one of {VALID_ROLES}, got {r!r}")
        if roles.count("time") > 1:
            raise ValueError("at most one time axis")
        if "time" in roles and roles[-1] != "time":
            raise ValueError("the time axis must be last")

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def time_axis(self) -> int | None:
        return self.roles.index("time") if "time" in self.roles else None

    @property
    def space_axes(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.roles) if r == "space")

    @property
    def steps(self) -> tuple[float, ...]:
        return tuple(l / n for l, n in zip(self.lengths, self.shape))

    @property
    def cell_volume(self) -> float:
        out = 1.0
        for s in self.steps:
            out *= s
        return out

    def axis_coords(self, axis: int) -> np.ndarray:
        n = self.shape[axis]
        return np.arange(n) * (self.lengths[axis] / n)

    def meshes(self) -> list[np.ndarray]:
        return list(np.meshgrid(*(self.axis_coords(i) for i in range(self.dim)), indexing="ij"))

    def wavenumbers(self, axis: int) -> np.ndarray:
        n = self.shape[axis]
        return 2.0 * np.pi * np.fft.fftfreq(n, d=self.steps[axis])

    def spatial(self) -> "GridSpec":
        """Grid restricted to the space axes (drops a trailing time axis)."""
        idx = self.space_axes
        return GridSpec(
            tuple(self.shape[i] for i in idx),
            tuple(self.lengths[i] for i in idx),
            tuple("space" for _ in idx),
        )

    def l2_norm(self, u: np.ndarray) -> float:
        """Grid L2 norm sqrt(sum |u|^2 * cell volume)."""
        u = np.asarray(u)
        return float(np.sqrt(np.sum(np.abs(u) ** 2) * self.cell_volume))

    def lp_norm(self, u: np.ndarray, p: float) -> float:
        u = np.asarray(u)
        if np.isinf(p):
            return float(np.max(np.abs(u)))
        return float((np.sum(np.abs(u) ** p) * self.cell_volume) ** (1.0 / p))

    def integral(self, u: np.ndarray) -> float | complex:
        val = np.sum(u) * self.cell_volume
        return complex(val) if np.iscomplexobj(u) else float(val)

    def to_text(self) -> str:
        return (
            "shape=" + ",".join(str(n) for n in self.shape)
            + " lengths=" + ",".join(repr(l) for l in self.lengths)
            + " roles=" + ",".join(self.roles)
        )

    @classmethod
    def from_text(cls, text: str) -> "GridSpec":
        kv = dict(part.split("=", 1) for part in text.split())
        return cls(
            tuple(int(s) for s in kv["shape"].split(",")),
            tuple(float(s) for s in kv["lengths"].split(",")),
            tuple(kv["roles"].split(",")),
        )
