"""
Poisson Representation

    J_a(y) = (y/2)^a / (Gamma(a+1/2) Gamma(1/2)) int_{-1}^{1} (1-s^2)^{a-1/2} cos(ys) ds

Moderate arguments use Gauss-Jacobi quadrature with weight (1-s^2)^{a-1/2}.
Large arguments deform the path into the upper half plane from both
endpoints (steepest descent) and integrate the resulting Laplace-type
integral with generalized Gauss-Laguerre nodes.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.special import gamma, roots_genlaguerre, roots_jacobi

from ..domain.models import BesselEval, BesselRoute
from ..errors import InvalidSamples, OrderOutOfRange

logger = logging.getLogger(__name__)

CONTOUR_SWITCH = 20.0
_JACOBI_BASE = 40
_LAGUERRE_NODES = 60
_BLOCK = 20_000


@lru_cache(maxsize=256)
def _jacobi_rule(n: int, a: float) -> Tuple[np.ndarray, np.ndarray]:
    return roots_jacobi(n, a, a)


@lru_cache(maxsize=256)
def _laguerre_rule(n: int, a: float) -> Tuple[np.ndarray, np.ndarray]:
    return roots_genlaguerre(n, a)


def _check_order(alpha: float) -> None:
    if alpha <= -0.5:
        raise OrderOutOfRange(f"Poisson representation needs order > -1/2, got {alpha}")


def _jacobi_values(alpha: float, y: np.ndarray) -> np.ndarray:
    a = alpha - 0.5
    n = _JACOBI_BASE + int(np.ceil(np.max(y, initial=0.0)))
    nodes, weights = _jacobi_rule(n, a)
    integral = np.cos(np.outer(y, nodes)) @ weights
    with np.errstate(divide="ignore", invalid="ignore"):
        pref = np.where(y > 0, (0.5 * y) ** alpha, 1.0 if alpha == 0 else 0.0)
    return pref * integral / (gamma(alpha + 0.5) * np.sqrt(np.pi))


def _contour_values(alpha: float, y: np.ndarray) -> np.ndarray:
    a = alpha - 0.5
    nodes, weights = _laguerre_rule(_LAGUERRE_NODES, a)
    body = (2.0 - 1j * nodes[None, :] / y[:, None]) ** a @ weights
    endpoint = (1j / y) * np.exp(-1j * y) * np.exp(0.5j * np.pi * a) * y ** (-a) * body
    return (0.5 * y) ** alpha * 2.0 * endpoint.real / (gamma(alpha + 0.5) * np.sqrt(np.pi))


def poisson_values(alpha: float, y) -> np.ndarray:
    """J_alpha at each y >= 0 through the Poisson representation."""
    _check_order(alpha)
    y = np.asarray(y, dtype=float)
    shape = y.shape
    y = y.ravel()
    if np.any(y < 0):
        raise InvalidSamples("Bessel argument must be nonnegative")
    out = np.empty(y.shape)
    near = np.flatnonzero(y <= CONTOUR_SWITCH)
    far = np.flatnonzero(y > CONTOUR_SWITCH)
    for lo in range(0, near.size, _BLOCK):
        idx = near[lo:lo + _BLOCK]
        out[idx] = _jacobi_values(alpha, y[idx])
    for lo in range(0, far.size, _BLOCK):
        idx = far[lo:lo + _BLOCK]
        out[idx] = _contour_values(alpha, y[idx])
    return out.reshape(shape)


def bessel_poisson(alpha: float, y: float) -> float:
    return float(poisson_values(alpha, [y])[0])


def poisson_eval(alpha: float, y: float) -> BesselEval:
    return BesselEval(order=alpha, argument=y, value=bessel_poisson(alpha, y), route=BesselRoute.POISSON)


def decay_constant(alpha: float, y_lo: float = 1.0, y_hi: float = 1e3, samples: int = 20_000) -> float:
    """Measured sup of sqrt(y) |J_alpha(y)| over [y_lo, y_hi]."""
    y = np.linspace(y_lo, y_hi, samples)
    return float(np.max(np.sqrt(y) * np.abs(poisson_values(alpha, y))))
