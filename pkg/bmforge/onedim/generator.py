"""
Radial Generator

Runs the one-dimensional chain for a radial weight phi:

    phi -> admissibility -> f (band [0, s]) -> f_sym -> g = f_sym/2 on r >= 0

deflating a zero at the origin when f_sym vanishes there. The generator g
satisfies |g| <= phi, g(0) != 0 and Tg(tau) = 0 for tau > 2 pi s.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.special import gamma

from ..domain.models import AdmissibilityReport, BandlimitedCandidate, SampledFunction, Verdict, WeightProfile
from ..errors import NotAdmissible
from ..quadrature import integrate
from ..weights import admissibility_check, even_extend
from .construct import construct_bandlimited_1d, symmetrize
from .deflate import deflate_origin_zero, plateau_radius
from .spectral import make_candidate, origin_index, reflect

logger = logging.getLogger(__name__)

ORIGIN_ZERO = 1e-12


@dataclass
class GeneratorResult:
    g: SampledFunction
    candidate: BandlimitedCandidate
    symmetric: BandlimitedCandidate
    lower_bound_constant: float
    ball_norm: float
    plateau_radius: float
    report: Optional[AdmissibilityReport] = None


def sphere_area(d: int) -> float:
    """|S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)."""
    return float(2.0 * np.pi ** (0.5 * d) / gamma(0.5 * d))


def ball_norm(g: SampledFunction, d: int) -> float:
    """L^2 norm on the unit ball of x -> g(|x|) in R^d."""
    inside = g.grid <= 1.0
    r = g.grid[inside]
    if r.size < 2:
        return 0.0
    return float(np.sqrt(sphere_area(d) * np.real(integrate(r, np.abs(g.values[inside]) ** 2 * r ** (d - 1)))))


def _scaled(c: BandlimitedCandidate, factor: float) -> BandlimitedCandidate:
    return replace(c, samples=replace(c.samples, values=factor * c.samples.values), origin_value=factor * c.origin_value)


def build_generator(
    phi: WeightProfile,
    sigma: float,
    d: int = 1,
    report: Optional[AdmissibilityReport] = None,
    grid_points: Optional[int] = None,
    extent: Optional[float] = None,
    projection_steps: Optional[int] = None,
    leakage_ceiling: Optional[float] = None,
) -> GeneratorResult:
    report = report or admissibility_check(phi, sigma, d)
    if report.verdict is Verdict.INADMISSIBLE:
        raise NotAdmissible(f"weight is inadmissible (log integral divergent={report.log_integral_divergent})")

    candidate = construct_bandlimited_1d(
        even_extend(phi),
        sigma,
        profile=phi,
        report=report,
        grid_points=grid_points,
        extent=extent,
        projection_steps=projection_steps,
        leakage_ceiling=leakage_ceiling,
    )
    sym = symmetrize(candidate)
    half = _scaled(sym, 0.5)
    peak = float(np.max(np.abs(half.samples.values)))
    if abs(half.origin_value) <= ORIGIN_ZERO * max(peak, np.finfo(float).tiny):
        logger.info("Symmetrized candidate vanishes at the origin; deflating")
        deflated = deflate_origin_zero(half)
        values = 0.5 * (deflated.samples.values + reflect(deflated.samples.values))
        half = make_candidate(
            values,
            deflated.samples.grid,
            deflated.sigma,
            deflated.band,
            deflated.weight.values,
            flags=deflated.flags,
            zero_order=deflated.zero_order,
            deflation_scale=deflated.deflation_scale,
        )

    mid = origin_index(half.samples.grid.size)
    g = SampledFunction(grid=half.samples.grid[mid:], values=half.samples.values[mid:])
    phi0 = float(phi.values[0])
    constant = abs(g.values[0]) / phi0 if phi0 > 0 else float("inf")
    result = GeneratorResult(
        g=g,
        candidate=candidate,
        symmetric=_scaled(half, 2.0),
        lower_bound_constant=constant,
        ball_norm=ball_norm(g, d),
        plateau_radius=plateau_radius(candidate),
        report=report,
    )
    logger.info(
        f"Generator: |g(0)|={abs(g.values[0]):.6g} C={constant:.6g} "
        f"ball_norm={result.ball_norm:.6g} leakage={candidate.leakage:.3e}"
    )
    return result


def generator_profile(phi: WeightProfile, sigma: float, **kwargs) -> SampledFunction:
    """The generator g of ``build_generator``."""
    return build_generator(phi, sigma, **kwargs).g
