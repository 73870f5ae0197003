"""
Hilbert Transforms

Principal-value transforms of sampled functions:

    H f(x)  = PV int_R (1/(x-t) + t/(t^2+1)) f(t) dt
    H+ f(x) = PV int_0^inf 2x f(t)/(x^2-t^2) dt

Both kernels are integrated exactly against the piecewise-linear
interpolant of the samples after subtracting f(x) (singularity
subtraction). The cell containing x then contributes -f'(x) times its
width. No 1/pi factor is applied: the classical conjugate function is H/pi.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from ..config import get_settings
from ..domain.models import SampledFunction, Symmetry
from ..errors import GridTooShort, InvalidSamples, SymmetryViolated, TailNotIntegrable
from ..parallel import chunk_for, map_chunks
from ..quadrature import doubling_rule

logger = logging.getLogger(__name__)


def _cells(f: SampledFunction):
    t0 = f.grid[:-1]
    t1 = f.grid[1:]
    slope = np.diff(f.values) / np.diff(f.grid)
    intercept = f.values[:-1] - slope * t0
    return t0, t1, slope, intercept


def _atan_diff(t0: np.ndarray, t1: np.ndarray) -> np.ndarray:
    """arctan(t1) - arctan(t0) without cancellation for short cells."""
    prod = 1.0 + t0 * t1
    with np.errstate(divide="ignore", invalid="ignore"):
        short = np.arctan((t1 - t0) / prod)
    return np.where(prod > 0, short, np.arctan(t1) - np.arctan(t0))


def _safe_log_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.log(np.abs(num) / np.abs(den))
    return np.where(np.isfinite(out), out, 0.0)


def _check_dp_tail(f: SampledFunction, halfline: bool) -> None:
    """Doubling rule on int |f| dP over the stored extent."""
    settings = get_settings()
    grid = f.grid
    absval = np.abs(f.values)
    cutoff = float(np.max(np.abs(grid)))
    if cutoff <= 0.0 or not np.any(absval):
        return

    def _partial(upto: float) -> float:
        mask = np.abs(grid) <= upto
        if np.count_nonzero(mask) < 2:
            return 0.0
        return float(trapezoid(absval[mask] / (1.0 + grid[mask] ** 2), grid[mask]))

    _, _, divergent, partials = doubling_rule(_partial, cutoff, settings.epsilon_tail, settings.divergence_ceiling)
    if divergent:
        kind = "half-line" if halfline else "line"
        raise TailNotIntegrable(f"{kind} transform: dP-weighted tail does not settle (partials {partials})")


def _interior_points(f: SampledFunction, points: Optional[Sequence[float]], lower: float) -> np.ndarray:
    if points is None:
        x = f.grid[(f.grid > lower) & (f.grid < f.grid[-1])]
    else:
        x = np.atleast_1d(np.asarray(points, dtype=float))
    if np.any(x < lower) or np.any(x >= f.grid[-1]) or (lower < 0 and np.any(x <= f.grid[0])):
        raise InvalidSamples("evaluation points must lie strictly inside the sampled extent")
    return x


def hilbert_line(f: SampledFunction, points: Optional[Sequence[float]] = None) -> SampledFunction:
    """Compensated Hilbert transform H f on the line."""
    if f.grid.size < 2:
        raise GridTooShort("Hilbert transform needs at least 2 samples")
    f = f.full_line()
    x = _interior_points(f, points, lower=-np.inf)
    _check_dp_tail(f, halfline=False)
    t0, t1, slope, intercept = _cells(f)
    a, b = f.grid[0], f.grid[-1]
    # compensation term, exact for linear cells: int t f(t)/(1+t^2) dt
    comp = np.sum(
        intercept * 0.5 * np.log1p((t1 * t1 - t0 * t0) / (1.0 + t0 * t0))
        + slope * ((t1 - t0) - _atan_diff(t0, t1))
    )

    def _block(xb: np.ndarray) -> np.ndarray:
        fx = f.evaluate(xb)
        lin_x = intercept[None, :] + slope[None, :] * xb[:, None]
        diff = lin_x - fx[:, None]
        logs = _safe_log_ratio(xb[:, None] - t0[None, :], xb[:, None] - t1[None, :])
        reg = np.sum(diff * logs - slope[None, :] * (t1 - t0)[None, :], axis=1)
        return reg + fx * np.log(np.abs(xb - a) / np.abs(b - xb)) + comp

    dtype = complex if f.is_complex else float
    values = map_chunks(_block, x, dtype=dtype, chunk=chunk_for(t0.size))
    return SampledFunction(grid=x, values=values)


def hilbert_halfline(f: SampledFunction, points: Optional[Sequence[float]] = None) -> SampledFunction:
    """Half-line transform H+ f for f sampled on r >= 0. H+ f(0) = 0."""
    if f.grid.size < 2:
        raise GridTooShort("Hilbert transform needs at least 2 samples")
    if f.grid[0] < 0:
        f = f.restrict_positive()
    x = _interior_points(f, points, lower=0.0)
    _check_dp_tail(f, halfline=True)
    t0, t1, slope, intercept = _cells(f)
    b = f.grid[-1]
    values_pos = SampledFunction(grid=f.grid, values=f.values)

    def _block(xb: np.ndarray) -> np.ndarray:
        fx = values_pos.evaluate(xb)
        lin_plus = intercept[None, :] + slope[None, :] * xb[:, None]
        lin_minus = intercept[None, :] - slope[None, :] * xb[:, None]
        sing = (lin_plus - fx[:, None]) * _safe_log_ratio(xb[:, None] - t0[None, :], xb[:, None] - t1[None, :])
        reg = (lin_minus - fx[:, None]) * _safe_log_ratio(xb[:, None] + t1[None, :], xb[:, None] + t0[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            edge = fx * np.log((b + xb) / (b - xb))
        out = np.sum(sing + reg, axis=1) + edge
        return np.where(xb == 0.0, 0.0, out)

    dtype = complex if f.is_complex else float
    values = map_chunks(_block, x, dtype=dtype, chunk=chunk_for(t0.size))
    return SampledFunction(grid=x, values=values)


def check_even_consistency(f_even: SampledFunction, points: Optional[Sequence[float]] = None) -> float:
    """sup |H f(x) - H+ (f restricted to r >= 0)(x)| after anchoring both at x = 0."""
    if f_even.symmetry is not Symmetry.EVEN:
        raise SymmetryViolated("even consistency check needs a function tagged EVEN")
    if points is None:
        pos = f_even.grid[(f_even.grid > 0) & (f_even.grid < f_even.grid[-1])]
        points = pos[:: max(1, pos.size // 200)]
    x = np.concatenate([[0.0], np.atleast_1d(np.asarray(points, dtype=float))])
    line = hilbert_line(f_even, x).values
    half = hilbert_halfline(SampledFunction(grid=f_even.grid, values=f_even.values), x).values
    line = line - line[0]
    half = half - half[0]
    discrepancy = float(np.max(np.abs(line - half)))
    logger.debug(f"Even consistency discrepancy {discrepancy:.3e} on {x.size} points")
    return discrepancy


def deriv_sup(g: SampledFunction) -> float:
    """max |centered difference| over interior points."""
    if g.grid.size < 3:
        raise GridTooShort("derivative estimate needs at least 3 samples")
    max_spacing = get_settings().hilbert_max_spacing
    if g.spacing > max_spacing:
        logger.warning(f"Grid spacing {g.spacing:.3e} exceeds {max_spacing:.3e}; derivative estimate may be coarse")
    full = g.full_line() if g.symmetry is not Symmetry.NONE else g
    grid, values = full.grid, full.values
    diffs = (values[2:] - values[:-2]) / (grid[2:] - grid[:-2])
    return float(np.max(np.abs(diffs)))
