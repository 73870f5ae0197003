"""Radial Fourier transforms on R^d and spectral-gap measurements."""

from .spectrum import route_function, spectrum_report, total_energy
from .transform import (
    characteristic_radius,
    exp_moment_transform,
    inner_sonine_integral,
    inner_sonine_values,
    moment_integrals,
    moment_scales,
    odd_taylor_terms,
    radial_fourier_direct,
    radial_fourier_odd,
    radial_weights,
    sonine_descent_transform,
)

__all__ = [
    "characteristic_radius",
    "exp_moment_transform",
    "inner_sonine_integral",
    "inner_sonine_values",
    "moment_integrals",
    "moment_scales",
    "odd_taylor_terms",
    "radial_fourier_direct",
    "radial_fourier_odd",
    "radial_weights",
    "route_function",
    "sonine_descent_transform",
    "spectrum_report",
    "total_energy",
]
