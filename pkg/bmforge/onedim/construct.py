"""
Band-Limited Construction Under a Weight

The seed is the outer function

    F(x) = exp(-Omega(x) - i (H Omega)(x) / pi) e^{i pi sigma x}

whose modulus is exactly the weight and whose spectrum starts at sigma/2.
Alternating projections (an inner band [t sigma, (1 - t) sigma] on the FFT
grid, then the clip |f| <= omega) pull the seed into the band. A final
band projection and a global rescale leave a trigonometric polynomial under
the weight. Multiplying it by a window whose spectrum lies in
[-t sigma, t sigma] and whose modulus is at most 1 keeps the bound and
places the spectrum on the whole line, not only on the FFT lines, inside
[0, sigma].
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from ..config import get_settings
from ..domain.models import AdmissibilityReport, BandlimitedCandidate, SampledFunction, Verdict, WeightProfile
from ..errors import CandidateVanished, InvalidSamples, LeakageTooHigh, NotAdmissible
from ..hilbert import hilbert_halfline
from ..weights import admissibility_check
from .spectral import make_candidate, periodic_grid, project_band, reflect, taper_window

logger = logging.getLogger(__name__)

LOG_FLOOR = 1e-300
ANNIHILATED = 1e-12


def _log_weight_source(omega_ev: SampledFunction, profile: Optional[WeightProfile]) -> SampledFunction:
    """Omega on r >= 0, from the profile when given."""
    if profile is not None:
        return profile.log_as_sampled()
    logger.warning("No weight profile given; taking the log-weight from the sampled weight values")
    pos = omega_ev.restrict_positive() if omega_ev.grid[0] < 0 else omega_ev
    return SampledFunction(grid=pos.grid, values=-np.log(np.maximum(np.abs(pos.values), LOG_FLOOR)))


def outer_seed(x: np.ndarray, log_weight: SampledFunction, sigma: float) -> np.ndarray:
    """exp(-Omega - i sign(x) H+ Omega(|x|) / pi) e^{i pi sigma x} on the grid ``x``."""
    radius = np.abs(x)
    unique, inverse = np.unique(radius, return_inverse=True)
    omega = np.interp(unique, log_weight.grid, log_weight.values)
    conj = hilbert_halfline(log_weight, unique).values / np.pi
    phase = np.sign(x) * conj[inverse]
    return np.exp(-omega[inverse] - 1j * phase + 1j * np.pi * sigma * x)


def construct_bandlimited_1d(
    omega_ev: SampledFunction,
    sigma: float,
    profile: Optional[WeightProfile] = None,
    report: Optional[AdmissibilityReport] = None,
    grid_points: Optional[int] = None,
    extent: Optional[float] = None,
    projection_steps: Optional[int] = None,
    leakage_ceiling: Optional[float] = None,
    taper_fraction: Optional[float] = None,
) -> BandlimitedCandidate:
    """Candidate f with |f| <= omega_ev and spectrum inside [0, sigma].

    ``profile`` is the radial weight behind ``omega_ev``; when given, its
    admissibility is checked (unless ``report`` is supplied) and its log
    values are used directly. With a taper fraction t > 0 the projections
    run on [t sigma, (1 - t) sigma] and the result is multiplied by
    ``taper_window`` of width t sigma.
    """
    if sigma <= 0:
        raise InvalidSamples(f"sigma must be positive, got {sigma}")
    settings = get_settings()
    n = grid_points or settings.grid_points
    extent = extent or settings.extent
    steps = settings.projection_steps if projection_steps is None else projection_steps
    ceiling = settings.leakage_ceiling if leakage_ceiling is None else leakage_ceiling
    fraction = settings.taper_fraction if taper_fraction is None else taper_fraction
    if not 0.0 <= fraction < 0.5:
        raise InvalidSamples(f"taper fraction must lie in [0, 1/2), got {fraction}")

    if report is None and profile is not None:
        report = admissibility_check(profile, sigma)
    if report is not None and report.verdict is Verdict.INADMISSIBLE:
        raise NotAdmissible(
            f"weight is inadmissible: log_integral_divergent={report.log_integral_divergent}, "
            f"lipschitz={report.lipschitz_constant:.4g}"
        )

    x = periodic_grid(n, extent)
    period = 2.0 * extent
    band = (0.0, sigma)
    width = fraction * sigma
    inner = (width, sigma - width)
    log_weight = _log_weight_source(omega_ev, profile)
    weight = np.exp(-np.interp(np.abs(x), log_weight.grid, log_weight.values))

    f = outer_seed(x, log_weight, sigma)
    for _ in range(steps):
        f = project_band(f, period, inner)
        mag = np.abs(f)
        f = f * np.minimum(1.0, weight / np.maximum(mag, LOG_FLOOR))
    flags = []
    if steps > 0:
        f = project_band(f, period, inner)
        ratio = float(np.max(np.abs(f) / weight))
        if ratio > 1.0:
            f = f / ratio
            logger.debug(f"Rescaled candidate by 1/{ratio:.6g} after the final band projection")
        if width > 0.0:
            f = f * taper_window(x, width, settings.taper_order)
            flags.append(f"tapered:{fraction:g}")

    if not np.any(np.abs(f) > 0.0):
        raise CandidateVanished(f"alternating projections collapsed the candidate (sigma={sigma}, steps={steps})")

    candidate = make_candidate(f, x, sigma, band, weight, flags=flags)
    logger.info(
        f"Constructed candidate: sigma={sigma} n={n} L={period} steps={steps} taper={fraction:g} "
        f"leakage={candidate.leakage:.3e} |f(0)|={abs(candidate.origin_value):.4g} "
        f"majorization={candidate.majorization_ratio:.12g}"
    )
    if candidate.leakage > ceiling:
        raise LeakageTooHigh(candidate.leakage, ceiling)
    return candidate


def symmetrize(f: BandlimitedCandidate) -> BandlimitedCandidate:
    """f(x) + f(-x), measured against the band [-s, s]."""
    values = f.samples.values
    sym = values + reflect(values)
    flags = list(f.flags)
    top = max(abs(f.band[0]), abs(f.band[1]))
    if np.linalg.norm(sym) <= ANNIHILATED * np.linalg.norm(values):
        logger.warning("Symmetrization annihilated the candidate (odd input)")
        flags.append("symmetrization_annihilated")
    return make_candidate(
        sym,
        f.samples.grid,
        f.sigma,
        (-top, top),
        f.weight.values,
        flags=flags,
        zero_order=f.zero_order,
        deflation_scale=f.deflation_scale,
    )
