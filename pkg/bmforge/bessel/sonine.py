"""
Sonine Integrals

    J_{nu-mu-1}(y) = c(nu, mu) y^{mu+1} int_1^inf J_nu(ys) s^{1-nu} (s^2-1)^mu ds

The head s in [1, 2] is integrated in u with s = cosh u, so that
(s^2-1)^mu ds = sinh(u)^{2mu+1} du; the power of u is absorbed into a
Gauss-Jacobi weight. The tail is split into panels one half period pi/y
long. When nu - mu > 3/2 the panels are summed and the remaining tail is
integrated against the large-argument form of J_nu; otherwise the partial
integrals at the panel ends are combined by repeated
averaging. c(nu, mu) is calibrated against the Poisson route.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.special import roots_jacobi

from ..config import get_settings
from ..errors import ParameterWindowViolated, TailNotConverged
from ..quadrature import averaged_truncations, cumulative_panels, gauss_legendre, panel_rule
from .poisson import bessel_poisson
from .rayleigh import bessel_values

logger = logging.getLogger(__name__)

HEAD_END = 2.0
HEAD_NODES = 40
TAIL_TOL = 1e-6
TAIL_TERMS = 8

_calibration_cache: Dict[Tuple[float, float, float], float] = {}
_calibration_lock = threading.Lock()


@dataclass
class SonineIntegral:
    value: float
    spread: float
    half_periods: int
    absolutely_convergent: bool


def is_descent_pair(nu: float, mu: float) -> bool:
    """(d/2 - 1/2, -1/2) for an integer d >= 2."""
    d = 2.0 * nu + 1.0
    return mu == -0.5 and abs(d - round(d)) < 1e-12 and round(d) >= 2


def check_window(nu: float, mu: float) -> None:
    if is_descent_pair(nu, mu):
        return
    if not (-1.0 < mu < nu < 2.0 * mu + 0.5):
        raise ParameterWindowViolated(
            f"(nu, mu) = ({nu}, {mu}) outside -1 < mu < nu < 2 mu + 1/2 and not a descent pair"
        )


def absolutely_convergent(nu: float, mu: float) -> bool:
    """nu - mu > 3/2: the integrand is integrable in absolute value with room to spare."""
    return nu - mu > 1.5


def _power_tail(b: float, y: float, s: float, terms: int = TAIL_TERMS) -> complex:
    """int_s^inf t^b e^{i y t} dt from repeated integration by parts."""
    z = 1j / (y * s)
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    for k in range(terms):
        total += term
        term = term * (b - k) * z
    return (1j / y) * s ** b * np.exp(1j * y * s) * total


def _asymptotic_tail(nu: float, mu: float, y: float, s: float) -> float:
    """int_s^inf J_nu(yt) t^{1-nu} (t^2-1)^mu dt from the large-argument form of J_nu.

    J_nu(z) ~ sqrt(2 / (pi z)) (cos(z - theta) - (4 nu^2 - 1) / (8 z) sin(z - theta)),
    theta = nu pi / 2 + pi / 4, and (t^2 - 1)^mu ~ t^{2 mu}.
    """
    b = 0.5 - nu + 2.0 * mu
    theta = 0.5 * nu * np.pi + 0.25 * np.pi
    c = (4.0 * nu * nu - 1.0) / (8.0 * y)
    value = np.exp(-1j * theta) * (_power_tail(b, y, s) + 1j * c * _power_tail(b - 1.0, y, s))
    return float(np.sqrt(2.0 / (np.pi * y)) * value.real)


def _head(nu: float, mu: float, y: float, substitution: bool) -> float:
    if substitution:
        u_end = float(np.arccosh(HEAD_END))
        beta = 2.0 * mu + 1.0
        x, w = roots_jacobi(HEAD_NODES, 0.0, beta)
        u = 0.5 * u_end * (x + 1.0)
        # Jacobi weight (1+x)^beta = (2u/u_end)^beta
        w = w * (0.5 * u_end) ** (beta + 1.0)
        s = np.cosh(u)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(u > 0, np.sinh(u) / u, 1.0)
        smooth = bessel_values(nu, y * s) * s ** (1.0 - nu) * ratio ** beta
        return float(np.sum(w * smooth))
    s, w = gauss_legendre(1.0, HEAD_END, HEAD_NODES)
    return float(np.sum(w * bessel_values(nu, y * s) * s ** (1.0 - nu) * (s * s - 1.0) ** mu))


def sonine_raw_integral(
    nu: float,
    mu: float,
    y: float,
    half_periods: Optional[int] = None,
    substitution: bool = True,
) -> SonineIntegral:
    """int_1^inf J_nu(ys) s^{1-nu} (s^2-1)^mu ds as an improper integral.

    With ``absolutely_convergent`` the panels are summed directly and the
    tail beyond the last panel comes from ``_asymptotic_tail``; otherwise
    the partial integrals at half periods are averaged.
    """
    settings = get_settings()
    half_periods = half_periods or settings.sonine_half_periods
    levels = settings.sonine_averaging_levels
    per_panel = settings.sonine_panel_nodes
    direct = absolutely_convergent(nu, mu)
    step = np.pi / y
    head = _head(nu, mu, y, substitution)
    edges = HEAD_END + step * np.arange(half_periods + 1)
    nodes, weights = panel_rule(edges, per_panel)
    integrand = bessel_values(nu, y * nodes) * nodes ** (1.0 - nu) * (nodes * nodes - 1.0) ** mu
    partials = head + np.array(cumulative_panels(integrand, weights, per_panel))
    partials = np.concatenate([[head], partials])

    if direct:
        middle = half_periods // 2
        value = float(partials[-1]) + _asymptotic_tail(nu, mu, y, float(edges[-1]))
        half = float(partials[middle]) + _asymptotic_tail(nu, mu, y, float(edges[middle]))
        spread = abs(value - half)
    else:
        value, spread = averaged_truncations(partials, levels)
        half, _ = averaged_truncations(partials[: half_periods // 2 + 1], levels)
    scale = max(abs(value), abs(head), 1e-300)
    if abs(value - half) > TAIL_TOL * scale:
        raise TailNotConverged(
            f"Sonine integral ({nu}, {mu}) at y={y}: truncations at R and R/2 differ by {abs(value - half):.3e}"
        )
    return SonineIntegral(value=value, spread=spread, half_periods=half_periods, absolutely_convergent=direct)


def calibrate_sonine_constant(nu: float, mu: float, anchor: Optional[float] = None) -> float:
    """c(nu, mu) matching the Sonine route to the Poisson route at ``anchor``."""
    check_window(nu, mu)
    anchor = anchor if anchor is not None else get_settings().sonine_anchor
    key = (float(nu), float(mu), float(anchor))
    cached = _calibration_cache.get(key)
    if cached is not None:
        return cached
    raw = sonine_raw_integral(nu, mu, anchor).value
    target = bessel_poisson(nu - mu - 1.0, anchor)
    constant = target / (anchor ** (mu + 1.0) * raw)
    with _calibration_lock:
        _calibration_cache.setdefault(key, constant)
        constant = _calibration_cache[key]
    logger.info(f"Calibrated Sonine constant c({nu}, {mu}) = {constant:.12g} at anchor y={anchor}")
    return constant


def sonine_integral(
    nu: float,
    mu: float,
    y: float,
    R: Optional[float] = None,
    substitution: bool = True,
    constant: Optional[float] = None,
) -> float:
    """J_{nu-mu-1}(y) through the Sonine integral.

    ``R`` sets the truncation radius; the tail is cut into half periods up
    to R. ``constant`` overrides the calibrated c(nu, mu).
    """
    check_window(nu, mu)
    if y <= 0:
        raise ParameterWindowViolated(f"Sonine route needs y > 0, got {y}")
    half_periods = None
    if R is not None:
        half_periods = max(4, int(np.ceil((R - HEAD_END) * y / np.pi)))
    raw = sonine_raw_integral(nu, mu, y, half_periods=half_periods, substitution=substitution)
    c = constant if constant is not None else calibrate_sonine_constant(nu, mu)
    return c * y ** (mu + 1.0) * raw.value

