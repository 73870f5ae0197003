"""
Removing a Zero at the Origin

A candidate vanishing to order N at 0 is divided N times by

    s(x) = L (e^{2 pi i x / L} - 1) / (2 pi i),

the periodic stand-in for x. On the coefficient side this is a running sum,
so the quotient keeps its spectrum inside the original band. The quotient
is then rescaled by one of two cases so that it stays under the weight.
"""

from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np

from ..config import get_settings
from ..domain.models import BandlimitedCandidate
from ..errors import InvalidSamples, ZeroDetectionFailed
from .spectral import band_mask, coefficients, make_candidate, origin_index, synthesize

logger = logging.getLogger(__name__)


def plateau_radius(candidate: BandlimitedCandidate, level: float = 0.5) -> float:
    """Largest r such that the weight stays >= ``level`` on [-r, r]."""
    grid = candidate.samples.grid
    weight = candidate.weight.values
    mid = origin_index(grid.size)
    right = weight[mid:] >= level
    left = weight[: mid + 1][::-1] >= level
    if not right[0]:
        return 0.0
    steps = min(
        int(np.argmin(right)) if not right.all() else right.size,
        int(np.argmin(left)) if not left.all() else left.size,
    )
    return float(grid[mid + steps - 1] - grid[mid])


def derivative_scales(candidate: BandlimitedCandidate, orders: int) -> np.ndarray:
    """|f^(m)(0)| / ((2 pi Lambda)^m ||f||_inf) for m = 0..orders, spectrally."""
    values = candidate.samples.values
    k, a = coefficients(values)
    period = candidate.period
    top = max(abs(candidate.band[0]), abs(candidate.band[1]), 1.0 / period)
    sup = float(np.max(np.abs(values)))
    if sup == 0.0:
        raise ZeroDetectionFailed("candidate vanishes identically")
    omega = 2j * np.pi * k / period
    out = np.empty(orders + 1)
    for m in range(orders + 1):
        out[m] = abs(np.sum(a * omega ** m)) / ((2.0 * np.pi * top) ** m * sup)
    return out


def zero_order(candidate: BandlimitedCandidate, threshold: Optional[float] = None, n_max: Optional[int] = None) -> int:
    settings = get_settings()
    threshold = settings.zero_threshold if threshold is None else threshold
    n_max = settings.n_max if n_max is None else n_max
    scales = derivative_scales(candidate, n_max)
    above = np.flatnonzero(scales > threshold)
    if above.size == 0:
        raise ZeroDetectionFailed(f"no derivative of order <= {n_max} at 0 exceeds {threshold:.1e}")
    return int(above[0])


def _divide_once(k: np.ndarray, a: np.ndarray, period: float, mask: np.ndarray) -> np.ndarray:
    order = np.argsort(k)
    q = np.zeros_like(a)
    q[order] = -np.cumsum(a[order]) * (2j * np.pi / period)
    return np.where(mask, q, 0.0)


def _rescale(f0: np.ndarray, grid: np.ndarray, rho: float, n: int) -> Tuple[np.ndarray, float, str]:
    """Two cases: rho^{-N} <= M gives f0/M, otherwise rho^N f0."""
    near = np.abs(grid) <= rho
    m = float(np.max(np.abs(f0[near])))
    if rho ** (-n) <= m:
        return f0 / m, 1.0 / m, "first"
    return f0 * rho ** n, rho ** n, "second"


def deflate_origin_zero(
    f: BandlimitedCandidate,
    rho: Optional[float] = None,
    threshold: Optional[float] = None,
    n_max: Optional[int] = None,
) -> BandlimitedCandidate:
    """f(x)/x^N with a nonzero value at 0, spectrum and majorization kept.

    ``rho`` defaults to the plateau radius where the weight stays >= 1/2.
    """
    order = zero_order(f, threshold=threshold, n_max=n_max)
    if order == 0:
        return f
    rho = plateau_radius(f) if rho is None else rho
    if rho <= 0:
        raise InvalidSamples(f"plateau radius must be positive, got {rho}")

    grid = f.samples.grid
    k, a = coefficients(f.samples.values)
    mask = band_mask(grid.size, f.period, f.band)
    for _ in range(order):
        a = _divide_once(k, a, f.period, mask)
    f0 = synthesize(k, a)

    out, scale, case = _rescale(f0, grid, rho, order)
    flags = list(f.flags) + [f"deflated:{order}", f"deflation_case:{case}"]
    weight = f.weight.values
    ratio = float(np.max(np.abs(out) / weight))
    if ratio > 1.0:
        logger.warning(f"Deflated candidate exceeds the weight by {ratio:.4g}; applying guard rescale")
        out = out / ratio
        scale = scale / ratio
        flags.append("guard_rescale")

    logger.info(f"Deflated zero of order {order} at 0 (case {case}, rho={rho:.4g}, scale={scale:.4g})")
    return make_candidate(
        out,
        grid,
        f.sigma,
        f.band,
        weight,
        flags=flags,
        zero_order=order,
        deflation_scale=scale,
    )
