"""One-dimensional band-limited constructions under a weight."""

from .construct import construct_bandlimited_1d, outer_seed, symmetrize
from .cosine import cosine_transform, even_factor_check, fourier_1d, generator_of
from .deflate import deflate_origin_zero, derivative_scales, plateau_radius, zero_order
from .generator import GeneratorResult, ball_norm, build_generator, generator_profile, sphere_area
from .spectral import leakage_1d, make_candidate, periodic_grid, project_band, taper_window

__all__ = [
    "GeneratorResult",
    "ball_norm",
    "build_generator",
    "construct_bandlimited_1d",
    "cosine_transform",
    "deflate_origin_zero",
    "derivative_scales",
    "even_factor_check",
    "fourier_1d",
    "generator_of",
    "generator_profile",
    "leakage_1d",
    "make_candidate",
    "outer_seed",
    "periodic_grid",
    "plateau_radius",
    "project_band",
    "sphere_area",
    "symmetrize",
    "taper_window",
    "zero_order",
]
