"""
Admissibility Checks

Decides which construction a radial weight supports:

- (i)   phi in L^2(R+, (1+r)^{2d+2} dr)
- (ii)  finite logarithmic integral
- (iii) sup |(H+ Omega)'| <= pi sigma

Both pi sigma and pi sigma / 2 are recorded for (iii).
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from ..domain.models import AdmissibilityReport, SampledFunction, Verdict, WeightProfile
from ..errors import InvalidSamples
from ..hilbert import deriv_sup, hilbert_halfline
from .profile import (
    lipschitz_constant,
    log_integral_poisson,
    radial_l2_norm,
    radial_log_integral,
    weighted_l2_decay,
)

logger = logging.getLogger(__name__)

AUDIT_EXTENT = 100.0
AUDIT_STEP = 0.05
HAN_SCHLAG_SIGMA = 0.1


def hilbert_derivative_sup(phi: WeightProfile) -> float:
    """sup |(H+ Omega)'| on a uniform audit grid near the origin."""
    extent = min(AUDIT_EXTENT, 0.5 * float(phi.grid[-1]))
    points = np.arange(0.0, extent, AUDIT_STEP)
    conj = hilbert_halfline(SampledFunction(grid=phi.grid, values=phi.log_values), points)
    return deriv_sup(conj)


def admissibility_check(phi: WeightProfile, sigma: float, d: Optional[int] = None) -> AdmissibilityReport:
    if sigma <= 0:
        raise InvalidSamples(f"sigma must be positive, got {sigma}")
    d = d or phi.dimension_hint or 1

    log_int = log_integral_poisson(phi)
    lip = lipschitz_constant(phi)
    radial = radial_log_integral(phi, d)
    decay = weighted_l2_decay(phi, d)
    l2 = radial_l2_norm(phi, d)

    threshold_full = np.pi * sigma
    threshold_half = 0.5 * np.pi * sigma
    if log_int.divergent or not np.isfinite(lip):
        deriv = float("inf")
        verdict = Verdict.INADMISSIBLE
    else:
        deriv = hilbert_derivative_sup(phi)
        han_schlag = (not decay.divergent) and deriv <= threshold_full and sigma < HAN_SCHLAG_SIGMA
        verdict = Verdict.HAN_SCHLAG_ADMISSIBLE if han_schlag else Verdict.BM_ADMISSIBLE

    report = AdmissibilityReport(
        log_integral=log_int.value,
        lipschitz_constant=lip,
        hilbert_deriv_sup=deriv,
        l2_decay_ok=not decay.divergent,
        verdict=verdict,
        sigma=sigma,
        dimension=d,
        log_integral_divergent=log_int.divergent,
        radial_log_integral=radial.value if not radial.divergent else float("inf"),
        radial_l2_ok=not l2.divergent,
        threshold_full=threshold_full,
        threshold_half=threshold_half,
        holds_full=deriv <= threshold_full,
        holds_half=deriv <= threshold_half,
    )
    logger.info(
        f"Admissibility: verdict={verdict.value} log_integral={log_int.value:.6g} "
        f"lipschitz={lip:.4g} deriv_sup={deriv:.4g} (pi*sigma={threshold_full:.4g}) "
        f"l2_decay_ok={report.l2_decay_ok} radial_l2_ok={report.radial_l2_ok}"
    )
    return report
