import numpy as np
import pytest

from wickpde.grids import GridSpec
from wickpde.spectral import SpectralKernel, hilbert_transform, spectral_derivative


@pytest.fixture
def grid():
    return GridSpec((128,), (2 * np.pi,))


def test_derivative_sin(grid):
    x = grid.axis_coords(0)
    np.testing.assert_allclose(
        spectral_derivative(np.sin(x), grid, 1), np.cos(x), atol=1e-12
    )


def test_derivative_constant(grid):
    np.testing.assert_allclose(
        spectral_derivative(np.full(128, 2.5), grid, 1), np.zeros(128), atol=1e-13
    )


def test_derivative_third_order_single_mode(grid):
    x = grid.axis_coords(0)
    u = np.exp(1j * 3 * x)
    np.testing.assert_allclose(
        spectral_derivative(u, grid, 3), (1j * 3) ** 3 * u, atol=1e-10
    )


def test_derivative_2d_axis():
    g = GridSpec((32, 64), (2 * np.pi, 4 * np.pi))
    X, Y = g.meshes()
    u = np.sin(X) * np.cos(Y)
    np.testing.assert_allclose(
        spectral_derivative(u, g, 1, axis=1), -np.sin(X) * np.sin(Y), atol=1e-11
    )


def test_derivative_order_validation(grid):
    with pytest.raises(ValueError):
        spectral_derivative(np.zeros(128), grid, 4)


def test_hilbert_constant(grid):
    np.testing.assert_allclose(
        hilbert_transform(np.full(128, 3.0), grid), np.zeros(128), atol=1e-13
    )


def test_hilbert_squares_to_minus_projection(grid):
    rng = np.random.default_rng(6)
    x = grid.axis_coords(0)
    f = sum(rng.normal() * np.cos(k * x) + rng.normal() * np.sin(k * x) for k in range(1, 20))
    f += 2.0
    hh = hilbert_transform(hilbert_transform(f, grid), grid)
    np.testing.assert_allclose(hh, -(f - f.mean()), atol=1e-12)


def test_hilbert_cos_to_sin(grid):
    x = grid.axis_coords(0)
    for k in (1, 3, 7):
        np.testing.assert_allclose(
            hilbert_transform(np.cos(k * x), grid), np.sin(k * x), atol=1e-12
        )


def test_hilbert_matches_principal_value_quadrature(grid):
    # PV (1/pi) int f(y)/(x - y) dy for f = cos, on a symmetric offset grid
    # that straddles the singularity; independent of any FFT.
    x0 = 0.7
    delta = 1e-3
    j = np.arange(1, 2_000_000)
    offs = np.concatenate([-(j[::-1] - 0.5), (j - 0.5)]) * delta
    y = x0 + offs
    pv = np.sum(np.cos(y) / (x0 - y)) * delta / np.pi
    assert pv == pytest.approx(np.sin(x0), abs=5e-4)
    # and the discrete operator agrees with the same sign
    xg = grid.axis_coords(0)
    h = hilbert_transform(np.cos(xg), grid)
    idx = int(np.argmin(np.abs(xg - x0)))
    assert h[idx] == pytest.approx(np.sin(xg[idx]), abs=1e-10)


def test_dealias_removes_aliased_mode():
    g = GridSpec((32,), (2 * np.pi,))
    kern = SpectralKernel(g)
    x = g.axis_coords(0)
    k1, k2 = 12, 13  # k1 + k2 = 25 aliases onto 25 - 32 = -7 on a 32 grid
    u = np.cos(k1 * x)
    v = np.cos(k2 * x)
    raw = np.fft.fft(u * v)
    assert abs(raw[32 - 7]) > 1.0  # aliased energy present without masking
    clean = kern.dealias(u) * kern.dealias(v)
    spec = np.fft.fft(kern.dealias(clean))
    assert np.max(np.abs(spec)) < 1e-10  # both inputs above 2/3 cutoff: gone


def test_kernel_multipliers_reproducible():
    g = GridSpec((64,), (5.0,))
    a, b = SpectralKernel(g), SpectralKernel(g)
    np.testing.assert_array_equal(a.ksq, b.ksq)
    np.testing.assert_array_equal(a.heat_multiplier(0.5, 0.01), b.heat_multiplier(0.5, 0.01))
    np.testing.assert_array_equal(a.schrodinger_multiplier(0.01), b.schrodinger_multiplier(0.01))
    np.testing.assert_array_equal(a.airy_multiplier(0.01), b.airy_multiplier(0.01))
    np.testing.assert_array_equal(a.benjamin_ono_multiplier(0.01), b.benjamin_ono_multiplier(0.01))


def test_kernel_rejects_time_axis():
    g = GridSpec((32, 16), (4.0, 1.0), ("space", "time"))
    with pytest.raises(ValueError):
        SpectralKernel(g)


def test_free_flow_multiplier_unitary():
    g = GridSpec((64,), (8.0,))
    kern = SpectralKernel(g)
    assert np.max(np.abs(np.abs(kern.schrodinger_multiplier(0.37)) - 1.0)) < 1e-14
