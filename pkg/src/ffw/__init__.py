"""Exact analytic Fourier-Feynman transforms of polynomial cylinder functionals."""
from .combinatorics import GaussianRational
from .cylinder import MonomialFunctional, Polynomial, poly_eval, poly_eval_exact, pretty_print
from .montecarlo import MCEstimate, WienerMCConfig, estimate_t_lambda, estimate_wiener_integral
from .oracle import hermite_rule, quad_shifted_integral
from .series import SmoothFunctionalSpec, series_fft_full, series_fft_paper, wiener_integral_truncation
from .transform import (
    FFTResult,
    ShiftParameters,
    analytic_fft,
    feynman_integral,
    general_monomial_transform,
    t_lambda_poly,
)

__version__ = "0.1.0"

__all__ = [
    "FFTResult",
    "GaussianRational",
    "MCEstimate",
    "MonomialFunctional",
    "Polynomial",
    "ShiftParameters",
    "SmoothFunctionalSpec",
    "WienerMCConfig",
    "analytic_fft",
    "estimate_t_lambda",
    "estimate_wiener_integral",
    "feynman_integral",
    "general_monomial_transform",
    "hermite_rule",
    "poly_eval",
    "poly_eval_exact",
    "pretty_print",
    "quad_shifted_integral",
    "series_fft_full",
    "series_fft_paper",
    "t_lambda_poly",
    "wiener_integral_truncation",
]
