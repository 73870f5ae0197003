"""
Rayleigh Formula and P/Q Structure

Half-integer Bessel functions from

    J_{n+1/2}(y) = (-1)^n sqrt(2/pi) y^{n+1/2} ((1/y) d/dy)^n (sin y / y)

evaluated symbolically: ((1/y) d/dy)^n (sin y / y) = (A_n sin y + B_n cos y) / y^{2n+1}
with polynomials

    A_{n+1} = y (A_n' - B_n) - (2n+1) A_n
    B_{n+1} = y (A_n + B_n') - (2n+1) B_n,   A_0 = 1, B_0 = 0.

For odd d = 2n+3 this gives y^{d/2} J_{d/2-1}(y) = c(d) (cos y P_d(y) + sin y Q_d(y))
with P_d = (-1)^n y B_n, Q_d = (-1)^n y A_n and c(d) = sqrt(2/pi).
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import gamma

from ..config import get_settings
from ..domain.models import BesselEval, BesselRoute, PQPolynomials
from ..errors import ArgumentTooSmall, DimensionInvalid, DimensionNotOdd, DimensionTooLarge, InvalidSamples
from .poisson import poisson_values

logger = logging.getLogger(__name__)

AUDIT_POINTS = (0.5, 2.0, 9.0, 33.0)
AUDIT_TOL = 1e-10
_SERIES_TERMS = 60


@lru_cache(maxsize=64)
def rayleigh_polynomials(n: int) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """Coefficients (by power) of A_n and B_n."""
    a = np.array([1.0])
    b = np.array([0.0])
    y = np.array([0.0, 1.0])
    for k in range(n):
        a_next = P.polysub(P.polymul(y, P.polysub(P.polyder(a), b)), (2 * k + 1) * a)
        b_next = P.polysub(P.polymul(y, P.polyadd(a, P.polyder(b))), (2 * k + 1) * b)
        a, b = P.polytrim(a_next), P.polytrim(b_next)
    return tuple(a), tuple(b)


def _series_values(order: float, y: np.ndarray) -> np.ndarray:
    """Ascending series sum_k (-1)^k (y/2)^{2k+order} / (k! Gamma(k+order+1))."""
    half = 0.5 * y
    term = half ** order / gamma(order + 1.0)
    total = term.copy()
    sq = half * half
    for k in range(1, _SERIES_TERMS):
        term = -term * sq / (k * (k + order))
        total += term
    return total


def _closed_form(n: int, y: np.ndarray) -> np.ndarray:
    a, b = rayleigh_polynomials(n)
    poly = P.polyval(y, np.array(a)) * np.sin(y) + P.polyval(y, np.array(b)) * np.cos(y)
    return (-1) ** n * np.sqrt(2.0 / (np.pi * y)) * poly / y ** n


def rayleigh_values(n: int, y, series_fallback: bool = True) -> np.ndarray:
    """J_{n+1/2} at each y > 0."""
    if n < 0:
        raise InvalidSamples(f"Rayleigh order index must be nonnegative, got {n}")
    y = np.asarray(y, dtype=float)
    shape = y.shape
    y = y.ravel()
    y_min = get_settings().rayleigh_y_min
    if np.any(y < 0):
        raise InvalidSamples("Bessel argument must be nonnegative")
    if not series_fallback and np.any(y < y_min):
        raise ArgumentTooSmall(f"argument below y_min={y_min} without series fallback")
    out = np.empty(y.shape)
    switch = max(y_min, n + 2.0) if n >= 1 else y_min
    small = y < switch if series_fallback else np.zeros(y.shape, dtype=bool)
    if np.any(small):
        out[small] = _series_values(n + 0.5, y[small])
    if np.any(~small):
        out[~small] = _closed_form(n, y[~small])
    return out.reshape(shape)


def bessel_rayleigh(n: int, y: float, series_fallback: bool = True) -> float:
    if y <= 0 and not series_fallback:
        raise ArgumentTooSmall("Rayleigh formula is singular at 0")
    return float(rayleigh_values(n, [y], series_fallback=series_fallback)[0])


def rayleigh_eval(n: int, y: float) -> BesselEval:
    return BesselEval(order=n + 0.5, argument=y, value=bessel_rayleigh(n, y), route=BesselRoute.RAYLEIGH)


def bessel_values(order: float, y) -> np.ndarray:
    """J_order at each y >= 0: Rayleigh for half-integer orders, Poisson otherwise."""
    twice = 2.0 * order
    if order > 0 and abs(twice - round(twice)) < 1e-12 and int(round(twice)) % 2 == 1:
        return rayleigh_values(int(round(order - 0.5)), y)
    return poisson_values(order, y)


def _parity(coeffs: np.ndarray) -> str:
    nz = np.flatnonzero(np.abs(coeffs) > 0)
    if nz.size == 0:
        return "zero"
    if np.all(nz % 2 == 0):
        return "even"
    if np.all(nz % 2 == 1):
        return "odd"
    return "mixed"


def audit_pq(pq: PQPolynomials, points: Sequence[float] = AUDIT_POINTS) -> float:
    """Largest relative error of the P/Q identity against the Poisson route.

    Errors are measured relative to c(d)(|cos y P(y)| + |sin y Q(y)|).
    """
    y = np.asarray(points, dtype=float)
    exact = y ** (0.5 * pq.d) * poisson_values(0.5 * pq.d - 1.0, y)
    err = np.abs(pq.kernel(y) - exact) / np.maximum(pq.term_scale(y), np.finfo(float).tiny)
    return float(np.max(err))


def pq_polynomials(d: int) -> PQPolynomials:
    if d < 1:
        raise DimensionInvalid(f"dimension must be >= 1, got {d}")
    if d % 2 == 0 or d < 3:
        raise DimensionNotOdd(f"P/Q structure needs an odd dimension >= 3, got {d}")
    ceiling = get_settings().pq_max_dim
    if d > ceiling:
        raise DimensionTooLarge(f"dimension {d} above the configured ceiling {ceiling}")
    n = (d - 3) // 2
    a, b = rayleigh_polynomials(n)
    sign = (-1) ** n
    p_coeffs = sign * P.polymul([0.0, 1.0], np.array(b))
    q_coeffs = sign * P.polymul([0.0, 1.0], np.array(a))
    pq = PQPolynomials(
        d=d,
        p_coeffs=np.asarray(p_coeffs, dtype=float),
        q_coeffs=np.asarray(q_coeffs, dtype=float),
        prefactor=float(np.sqrt(2.0 / np.pi)),
        p_parity=_parity(np.asarray(p_coeffs)),
        q_parity=_parity(np.asarray(q_coeffs)),
    )
    pq.audit_error = audit_pq(pq)
    if pq.audit_error > AUDIT_TOL:
        logger.warning(f"P/Q identity for d={d} audits at {pq.audit_error:.3e}, above {AUDIT_TOL:.0e}")
    logger.debug(f"P/Q for d={d}: cos-part {pq.p_parity}, sin-part {pq.q_parity}, audit {pq.audit_error:.2e}")
    return pq
