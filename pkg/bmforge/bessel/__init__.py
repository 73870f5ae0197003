"""Bessel functions of the first kind by the Poisson, Rayleigh and Sonine routes."""

from .poisson import bessel_poisson, decay_constant, poisson_eval, poisson_values
from .rayleigh import bessel_rayleigh, bessel_values, pq_polynomials, rayleigh_eval, rayleigh_polynomials, rayleigh_values
from .sonine import (
    absolutely_convergent,
    calibrate_sonine_constant,
    check_window,
    is_descent_pair,
    sonine_integral,
    sonine_raw_integral,
)

__all__ = [
    "absolutely_convergent",
    "bessel_poisson",
    "bessel_rayleigh",
    "bessel_values",
    "calibrate_sonine_constant",
    "check_window",
    "decay_constant",
    "is_descent_pair",
    "poisson_eval",
    "poisson_values",
    "pq_polynomials",
    "rayleigh_eval",
    "rayleigh_polynomials",
    "rayleigh_values",
    "sonine_integral",
    "sonine_raw_integral",
]
