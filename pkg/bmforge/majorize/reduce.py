"""
Radial Reduction

Non-radial weight -> annulus maxima -> Hölder chain -> radial majorant
omega_rad = exp(-(Omega_1 + Omega(0))), audited against the weight at
random points and checked for admissibility before it is handed to the
radial construction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.stats import qmc

from ..config import get_settings
from ..domain.models import AdmissibilityReport, AnnulusDecomposition, HolderReport, Verdict, WeightProfile
from ..errors import HolderChainDiverged, MajorizationViolated, NotAdmissible
from ..weights.admissibility import admissibility_check
from .annuli import annulus_maxima, build_radial_majorant, evaluate_log_weight, unit_directions
from .expression import log_weight_evaluator
from .holder import check_gamma, verify_holder_chain

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], np.ndarray]

AUDIT_SEED_OFFSET = 7_919
AUDIT_TOL = 1e-9


@dataclass
class ReductionResult:
    profile: WeightProfile
    decomposition: AnnulusDecomposition
    holder: HolderReport
    admissibility: AdmissibilityReport
    audit_samples: int
    worst_margin: float


def audit_points(d: int, radius: float, count: int, seed: int) -> np.ndarray:
    """Points with log(1 + |x|) uniform on [0, log(1 + radius)]."""
    m = int(np.ceil(np.log2(max(count, 2))))
    u = qmc.Sobol(d=d + 1, scramble=True, seed=seed).random_base2(m)[:count]
    r = np.expm1(u[:, 0] * np.log1p(radius))
    return r[:, None] * unit_directions(u[:, 1:])


def audit_majorization(
    log_omega: Evaluator, profile: WeightProfile, d: int, radius: float, count: int, seed: int = 0
) -> float:
    """Worst margin Omega_rad(|x|) - Omega(x); raises when the majorant falls below Omega."""
    points = audit_points(d, radius, count, seed)
    omega = evaluate_log_weight(log_omega, points)
    margin = profile.log_evaluate(np.linalg.norm(points, axis=1)) - omega
    slack = AUDIT_TOL * np.maximum(1.0, np.abs(omega))
    bad = margin < -slack
    if np.any(bad):
        worst = int(np.argmin(margin))
        raise MajorizationViolated(
            f"radial majorant below Omega at {int(np.sum(bad))} of {count} samples; "
            f"worst margin {margin[worst]:.3e} at |x|={np.linalg.norm(points[worst]):.4g}"
        )
    return float(np.min(margin))


def reduce_nonradial_detailed(
    weight: Union[str, Evaluator],
    d: int,
    gamma: float,
    sigma: float,
    j_max: Optional[int] = None,
    samples: Optional[int] = None,
    audit_samples: Optional[int] = None,
    seed: int = 0,
    r_max: Optional[float] = None,
) -> ReductionResult:
    """Radial admissible weight below ``weight`` on R^d.

    ``weight`` is a preset name, an expression over x1..xd, or a callable
    returning Omega = log(1/omega) at points of shape (n, d).
    """
    check_gamma(gamma, d)
    settings = get_settings()
    audit_samples = audit_samples or settings.audit_samples
    log_omega = log_weight_evaluator(weight, d) if isinstance(weight, str) else weight

    decomp = annulus_maxima(log_omega, d, j_max=j_max, samples=samples, seed=seed, gamma=gamma)
    holder = verify_holder_chain(decomp)
    if holder.divergent:
        raise HolderChainDiverged(
            f"sum lambda_j^{d + 1} 2^(-j gamma) diverges for gamma={gamma}; no radial majorant with finite log integral"
        )
    if not holder.holds:
        logger.warning(f"Hölder bound not met numerically: S2={holder.rhs_sum:.6g} > {holder.bound:.6g}")

    omega1 = build_radial_majorant(decomp, r_max=r_max)
    # weights above 1 at the origin are lowered to 1, which keeps the majorization
    profile = WeightProfile(
        grid=omega1.grid,
        log_values=np.maximum(omega1.log_values + decomp.offset, 0.0),
        dimension_hint=d,
    )
    reach = min(float(decomp.outer_radii[-1]), float(profile.grid[-1]))
    worst = audit_majorization(log_omega, profile, d, reach, audit_samples, seed + AUDIT_SEED_OFFSET)

    report = admissibility_check(profile, sigma, d)
    if report.verdict is Verdict.INADMISSIBLE:
        raise NotAdmissible("radial majorant is not admissible")
    logger.info(
        f"Reduction d={d} gamma={gamma}: audit of {audit_samples} samples passed, "
        f"worst margin={worst:.4g}, verdict={report.verdict.value}"
    )
    return ReductionResult(
        profile=profile,
        decomposition=decomp,
        holder=holder,
        admissibility=report,
        audit_samples=audit_samples,
        worst_margin=worst,
    )


def reduce_nonradial(weight: Union[str, Evaluator], d: int, gamma: float, sigma: float, **kwargs) -> WeightProfile:
    return reduce_nonradial_detailed(weight, d, gamma, sigma, **kwargs).profile
