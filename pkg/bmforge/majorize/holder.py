"""
Hölder Chain

With beta = gamma / (d + 1) < 1,

    S2 = sum_j lambda_j 2^{-j}
       <= K(beta, d) * (sum_j lambda_j^{d+1} 2^{-j gamma})^{1/(d+1)} = K * S1^{1/(d+1)}

where K = (sum_j 2^{-j (1 - beta)(d + 1)/d})^{d/(d+1)} is the conjugate
exponent geometric sum. S1 finite is what makes the radial majorant's
logarithmic integral converge.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from ..domain.models import AnnulusDecomposition, HolderReport
from ..errors import GammaOutOfRange

logger = logging.getLogger(__name__)

RATIO_WINDOW = 5
HOLDS_TOL = 1e-12


def holder_constant(beta: float, d: int) -> float:
    """Closed form of the conjugate geometric sum; infinite once beta >= 1."""
    if beta >= 1.0:
        return float("inf")
    exponent = (1.0 - beta) * (d + 1) / d
    return float((1.0 / (1.0 - 2.0 ** (-exponent))) ** (d / (d + 1)))


def check_gamma(gamma: float, d: int) -> None:
    if not (0.0 < gamma < d + 1):
        raise GammaOutOfRange(f"gamma must lie in (0, d + 1) = (0, {d + 1}), got {gamma}")


def _series_terms(lambdas: np.ndarray, gamma: float, d: int) -> np.ndarray:
    j = np.arange(lambdas.size)
    terms = np.zeros(lambdas.size)
    positive = lambdas > 0
    with np.errstate(over="ignore"):
        terms[positive] = np.exp((d + 1) * np.log(lambdas[positive]) - j[positive] * gamma * np.log(2.0))
    return terms


def _tail_ratio(terms: np.ndarray) -> float:
    """Geometric ratio of the last terms; 0 when they vanish."""
    window = terms[-RATIO_WINDOW:]
    if window.size < 2 or window[-1] == 0.0:
        return 0.0
    if window[0] == 0.0:
        return float("inf")
    return float((window[-1] / window[0]) ** (1.0 / (window.size - 1)))


def verify_holder_chain(decomp: AnnulusDecomposition, gamma: Optional[float] = None) -> HolderReport:
    gamma = decomp.gamma if gamma is None else gamma
    d = decomp.d
    check_gamma(gamma, d)
    lambdas = decomp.lambdas

    terms = _series_terms(lambdas, gamma, d)
    s1 = float(np.sum(terms))
    s2 = float(np.sum(lambdas * 2.0 ** -np.arange(lambdas.size)))
    q = _tail_ratio(terms)
    divergent = not (np.isfinite(s1) and np.isfinite(s2)) or q >= 1.0
    tail = float("inf") if divergent else float(terms[-1] * q / (1.0 - q))

    beta = gamma / (d + 1)
    constant = holder_constant(beta, d)
    bound = constant * s1 ** (1.0 / (d + 1)) if not divergent else float("inf")
    holds = (not divergent) and s2 <= bound * (1.0 + HOLDS_TOL) + HOLDS_TOL

    report = HolderReport(
        lhs_sum=s1,
        rhs_sum=s2,
        beta=beta,
        constant=constant,
        bound=bound,
        holds=holds,
        divergent=divergent,
        tail_estimate=tail,
    )
    if divergent:
        logger.warning(f"Hölder chain diverges: S1={s1:.6g} tail ratio={q:.4g}")
    else:
        logger.info(f"Hölder chain: S1={s1:.6g} S2={s2:.6g} K={constant:.6g} bound={bound:.6g} holds={holds}")
    return report
