"""White noise and Brownian sheets as chaos fields.

The white-noise field is a genuine distribution: its pointwise variance is
a divergent series in the truncation size N.  Its antiderivative, the
Brownian sheet, is an honest L2 object whose covariance partial sums
converge to min(x, y).  Both are built here and plotted, together with a
smoothed sample path.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wickpde import (
    GridSpec,
    NoiseSpec,
    brownian_sheet_field,
    hermite_window,
    mean_variance,
    sample_path,
    smooth,
    white_noise_field,
)
from wickpde.chaos import field_to_stack

OUT = __file__.rsplit("/", 1)[0] + "/output"
import os

os.makedirs(OUT, exist_ok=True)

grid = GridSpec((512,), (32.0,))
center = 256

print("pointwise variance of the truncated white noise at the origin:")
for N in (1, 5, 20, 80):
    W = white_noise_field(NoiseSpec(basis_count=N), grid)
    var = mean_variance(W)[1][center]
    print(f"  N={N:3d}: var(0) = {var:.3f}")
print("  (diverges with N: the field only exists as a distribution)")

# Brownian motion covariance vs min(x, y)
N = 200
L = 2 * hermite_window(N)
bgrid = GridSpec((4096,), (L,))
B = brownian_sheet_field(NoiseSpec(basis_count=N), bgrid)
stack = field_to_stack(B)
y = bgrid.axis_coords(0) - L / 2
sel = (y >= 0) & (y <= 1.5)
var = np.sum(stack[:, sel] ** 2, axis=0)
print(f"\nBrownian motion: sup |Var B_y - y| on [0, 1.5] = {np.max(np.abs(var - y[sel])):.4f}")

# a smoothed sample path
spec = NoiseSpec(basis_count=40, gamma=1.0, seed=7)
xi, rough = sample_path(spec, grid)
smoothed = smooth(white_noise_field(spec, grid), 1.0)
from wickpde import sample_eval

smooth_path = sample_eval(smoothed, xi)

fig, axes = plt.subplots(1, 3, figsize=(13, 3.4))
axes[0].plot(y[sel], var, label="partial sum, N=200")
axes[0].plot(y[sel], y[sel], "k--", label="min(y, y)")
axes[0].set_title("Brownian variance")
axes[0].legend()
x = grid.axis_coords(0)
axes[1].plot(x, rough, lw=0.7)
axes[1].set_title("white-noise sample (N=40)")
axes[2].plot(x, smooth_path, lw=1.0)
axes[2].set_title("same sample, smoothed (gamma=1)")
fig.tight_layout()
fig.savefig(os.path.join(OUT, "noise_fields.png"), dpi=130)
print(f"\nwrote {OUT}/noise_fields.png")
