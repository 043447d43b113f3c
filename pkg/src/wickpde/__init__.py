"""Wick-quantized stochastic PDE toolkit via truncated Wiener-chaos expansions."""

from .chaos import (
    BasisTag,
    ChaosField,
    analyticity_diagnostic,
    hermite_transform_eval,
    hk_norm,
    load_chaos_field,
    mean_variance,
    poisson_correspondence,
    sample_eval,
    save_chaos_field,
    wick_exp,
    wick_mul,
    wick_mul_overflow,
    wick_pow,
)
from .grids import GridSpec
from .hermite import BasisEvaluator, charlier_low, hermite_fn, hermite_poly, tensor_eta
from .multiindex import IndexSet, MultiIndex, ZERO_INDEX, enumerate_indices, unit_index
from .noise import (
    NoiseBasis,
    NoiseSpec,
    brownian_sheet_field,
    hermite_window,
    sample_path,
    smooth,
    white_noise_field,
)
from .spectral import SpectralKernel, hilbert_transform, spectral_derivative

__version__ = "0.1.0"

__all__ = [
    "BasisEvaluator",
    "BasisTag",
    "ChaosField",
    "GridSpec",
    "IndexSet",
    "MultiIndex",
    "NoiseBasis",
    "NoiseSpec",
    "SpectralKernel",
    "ZERO_INDEX",
    "analyticity_diagnostic",
    "brownian_sheet_field",
    "charlier_low",
    "enumerate_indices",
    "hermite_fn",
    "hermite_poly",
    "hermite_transform_eval",
    "hermite_window",
    "hilbert_transform",
    "hk_norm",
    "load_chaos_field",
    "mean_variance",
    "poisson_correspondence",
    "sample_eval",
    "sample_path",
    "save_chaos_field",
    "smooth",
    "spectral_derivative",
    "tensor_eta",
    "unit_index",
    "wick_exp",
    "wick_mul",
    "wick_mul_overflow",
    "wick_pow",
    "white_noise_field",
]
