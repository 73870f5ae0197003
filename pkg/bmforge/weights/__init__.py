"""Radial weights, log-weights and their admissibility."""

from .admissibility import admissibility_check, hilbert_derivative_sup
from .profile import (
    clamp_weight,
    even_extend,
    graded_grid,
    lipschitz_constant,
    load_weight,
    log_integral_poisson,
    preset_profile,
    radial_l2_norm,
    radial_log_integral,
    weighted_l2_decay,
)

__all__ = [
    "admissibility_check",
    "clamp_weight",
    "even_extend",
    "graded_grid",
    "hilbert_derivative_sup",
    "lipschitz_constant",
    "load_weight",
    "log_integral_poisson",
    "preset_profile",
    "radial_l2_norm",
    "radial_log_integral",
    "weighted_l2_decay",
]
