"""
Quadrature Rules

Integration rules shared by the transform and Bessel modules: end-corrected
trapezoid sums, exact Fourier integrals of piecewise-linear data (a Filon
type rule), Gauss-Legendre panels and averaged truncations for oscillatory
improper integrals.
"""

from __future__ import annotations

import logging
from math import factorial
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from .config import get_settings
from .errors import TailNotIntegrable

logger = logging.getLogger(__name__)

# Gregory end corrections of third order (weights in units of h)
_GREGORY_ENDS = np.array([3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0])
_SERIES_THETA = 0.1
_SERIES_TERMS = 10


def is_uniform(grid: np.ndarray, rtol: float = 1e-9) -> bool:
    if grid.size < 3:
        return True
    steps = np.diff(grid)
    return bool(np.max(np.abs(steps - steps[0])) <= rtol * abs(steps[0]))


def integration_weights(grid: np.ndarray) -> np.ndarray:
    """Weights w with sum(w * f) ~ integral of f over the grid.

    Uniform grids with at least 8 points get Gregory end corrections,
    anything else the trapezoid rule.
    """
    grid = np.asarray(grid, dtype=float)
    n = grid.size
    if n < 2:
        return np.zeros(n)
    if n >= 8 and is_uniform(grid):
        h = (grid[-1] - grid[0]) / (n - 1)
        w = np.full(n, h)
        w[:3] = h * _GREGORY_ENDS
        w[-3:] = h * _GREGORY_ENDS[::-1]
        return w
    steps = np.diff(grid)
    w = np.zeros(n)
    w[:-1] += 0.5 * steps
    w[1:] += 0.5 * steps
    return w


def integrate(grid: np.ndarray, values: np.ndarray) -> complex:
    """Integral of sampled values, see ``integration_weights``."""
    grid = np.asarray(grid, dtype=float)
    if grid.size >= 8 and is_uniform(grid):
        return np.sum(integration_weights(grid) * values)
    return trapezoid(values, grid)


def _segment_moments(theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """m0 = int_0^1 e^{-i theta s} ds and m1 = int_0^1 s e^{-i theta s} ds."""
    theta = np.asarray(theta, dtype=float)
    m0 = np.empty(theta.shape, dtype=complex)
    m1 = np.empty(theta.shape, dtype=complex)
    small = np.abs(theta) < _SERIES_THETA
    if np.any(small):
        z = -1j * theta[small]
        s0 = np.zeros(z.shape, dtype=complex)
        s1 = np.zeros(z.shape, dtype=complex)
        zk = np.ones(z.shape, dtype=complex)
        for k in range(_SERIES_TERMS):
            s0 += zk / (factorial(k) * (k + 1))
            s1 += zk / (factorial(k) * (k + 2))
            zk = zk * z
        m0[small] = s0
        m1[small] = s1
    big = ~small
    if np.any(big):
        t = theta[big]
        e = np.exp(-1j * t)
        m0[big] = -1j * (1.0 - e) / t
        m1[big] = 1j * e / t - (1.0 - e) / t ** 2
    return m0, m1


def linear_fourier(grid: np.ndarray, values: np.ndarray, omega: Sequence[float], block: int = 16) -> np.ndarray:
    """Exact integral of the piecewise-linear interpolant times e^{-i omega x}.

    ``omega`` is angular. Returns one complex value per omega.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    h = np.diff(grid)
    left = values[:-1]
    right = values[1:]
    out = np.empty(omega.size, dtype=complex)
    for lo in range(0, omega.size, block):
        om = omega[lo:lo + block, None]
        theta = om * h[None, :]
        m0, m1 = _segment_moments(theta)
        seg = h[None, :] * np.exp(-1j * om * grid[None, :-1]) * (left[None, :] * (m0 - m1) + right[None, :] * m1)
        out[lo:lo + block] = seg.sum(axis=1)
    return out


def linear_cosine(grid: np.ndarray, values: np.ndarray, y: Sequence[float]) -> np.ndarray:
    """Exact integral of the piecewise-linear interpolant times cos(y x)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    fwd = linear_fourier(grid, values, y)
    bwd = linear_fourier(grid, values, -y)
    return 0.5 * (fwd + bwd)


def linear_sine(grid: np.ndarray, values: np.ndarray, y: Sequence[float]) -> np.ndarray:
    """Exact integral of the piecewise-linear interpolant times sin(y x)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    fwd = linear_fourier(grid, values, y)
    bwd = linear_fourier(grid, values, -y)
    return 0.5j * (fwd - bwd)


def gauss_legendre(a: float, b: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def panel_rule(edges: Sequence[float], n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on consecutive panels."""
    x, w = np.polynomial.legendre.leggauss(n)
    edges = np.asarray(edges, dtype=float)
    half = 0.5 * np.diff(edges)
    nodes = edges[:-1, None] + half[:, None] * (x[None, :] + 1.0)
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def averaged_truncations(partials: Sequence[float], levels: int) -> Tuple[float, float]:
    """Repeated pairwise averaging of partial integrals.

    ``partials`` are integrals truncated at consecutive half periods of the
    integrand. Returns the averaged limit and the spread of the last level.
    """
    seq = np.asarray(partials, dtype=float)
    if seq.size < 2:
        raise ValueError("need at least two partial integrals")
    levels = min(levels, seq.size - 1)
    for _ in range(levels):
        seq = 0.5 * (seq[1:] + seq[:-1])
    spread = float(abs(seq[-1] - seq[-2])) if seq.size >= 2 else 0.0
    return float(seq[-1]), spread


def cumulative_panels(values: np.ndarray, weights: np.ndarray, per_panel: int) -> List[float]:
    """Running sums of a panel rule at each panel boundary."""
    contrib = (values * weights).reshape(-1, per_panel).sum(axis=1)
    return list(np.cumsum(contrib))


def doubling_rule(
    partial: Callable[[float], float],
    cutoff: float,
    epsilon: float,
    ceiling: float,
    min_ratio: Optional[float] = None,
) -> Tuple[float, float, bool, List[float]]:
    """Partial integrals at cutoff/4, cutoff/2 and cutoff.

    The integral is declared divergent when both doublings change it by more
    than ``epsilon`` relative, or when it exceeds ``ceiling``. With
    ``min_ratio`` set, a tail that shrinks between the doublings by more than
    that factor is accepted as convergent. Returns
    (value, tail estimate, divergent, partials).
    """
    partials = [float(partial(cutoff / 4.0)), float(partial(cutoff / 2.0)), float(partial(cutoff))]
    value = partials[-1]
    d1 = partials[1] - partials[0]
    d2 = partials[2] - partials[1]
    scale = max(abs(value), np.finfo(float).tiny)

    def _moved(delta: float, ref: float) -> bool:
        return abs(delta) > epsilon * max(abs(ref), np.finfo(float).tiny) and delta != 0.0

    moved = _moved(d1, partials[1]) and _moved(d2, value)
    if moved and min_ratio is not None and abs(d2) < min_ratio * abs(d1):
        moved = False
    divergent = moved or not np.isfinite(value) or abs(value) > ceiling
    if divergent:
        tail = float("inf")
    elif d1 != 0.0 and 0.0 <= d2 / d1 < 1.0:
        q = d2 / d1
        tail = abs(d2) * q / (1.0 - q)
    else:
        tail = abs(d2)
    logger.debug(f"Doubling rule partials={partials} tail={tail:.3e} divergent={divergent} scale={scale:.3e}")
    return value, tail, divergent, partials


TAIL_RATIO = 0.9


def check_moment_tail(grid: np.ndarray, values: np.ndarray, power: float, label: str) -> float:
    """Doubling rule on int |g(r)| r^power dr over the sampled extent.

    Raises TailNotIntegrable when the tail does not shrink. Returns the
    tail estimate.
    """
    grid = np.asarray(grid, dtype=float)
    absval = np.abs(values) * np.abs(grid) ** power
    cutoff = float(grid[-1])
    if cutoff <= 0.0 or not np.any(absval):
        return 0.0

    def _partial(upto: float) -> float:
        mask = grid <= upto
        if np.count_nonzero(mask) < 2:
            return 0.0
        return float(trapezoid(absval[mask], grid[mask]))

    settings = get_settings()
    _, tail, divergent, partials = doubling_rule(
        _partial, cutoff, settings.epsilon_tail, float("inf"), min_ratio=TAIL_RATIO
    )
    if divergent:
        raise TailNotIntegrable(f"{label}: int |g| r^{power:g} dr does not settle (partials {partials})")
    return tail
