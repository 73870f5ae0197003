"""
Weight Profiles

Radial weights phi and log-weights Omega = log(1/phi) on graded grids:
presets, two-column files, the Poisson-type logarithmic integral, the
Lipschitz estimate, the decay clamp and the even extension.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from ..config import get_settings
from ..domain.models import LogIntegralResult, SampledFunction, Symmetry, WeightProfile
from ..errors import GridTooShort, InvalidSamples, NegativeLogWeight, ParseError
from ..quadrature import doubling_rule, panel_rule

logger = logging.getLogger(__name__)

LogWeight = Union[WeightProfile, SampledFunction]

PRESETS = ("exp_sqrt", "power:Q", "const", "exp")

_PANEL_NODES = 4


def graded_grid(
    r_max: Optional[float] = None,
    uniform_points: Optional[int] = None,
    ratio: Optional[float] = None,
) -> np.ndarray:
    """Uniform on [0, 1], geometric with the given ratio up to ``r_max``."""
    settings = get_settings()
    r_max = settings.r_max if r_max is None else r_max
    uniform_points = settings.uniform_points if uniform_points is None else uniform_points
    ratio = settings.grading_ratio if ratio is None else ratio
    if ratio <= 1.0:
        raise InvalidSamples(f"grading ratio must exceed 1, got {ratio}")
    head = np.linspace(0.0, min(1.0, r_max), max(uniform_points, 2))
    if r_max <= 1.0:
        return head
    n_geo = int(np.ceil(np.log(r_max) / np.log(ratio)))
    tail = np.geomspace(1.0, r_max, n_geo + 1)[1:]
    return np.concatenate([head, tail])


def preset_log_weight(name: str, r: np.ndarray) -> np.ndarray:
    """Omega for a named preset."""
    r = np.asarray(r, dtype=float)
    if name == "exp_sqrt":
        return np.sqrt(1.0 + r) - 1.0
    if name == "const":
        return np.zeros_like(r)
    if name == "exp":
        return r.copy()
    if name.startswith("power:"):
        try:
            q = float(name.split(":", 1)[1])
        except ValueError as exc:
            raise ParseError(f"bad power preset '{name}'") from exc
        if q <= 0:
            raise ParseError(f"power preset needs Q > 0, got {q}")
        return q * np.log1p(r)
    raise ParseError(f"unknown weight preset '{name}'")


def preset_profile(name: str, grid: Optional[np.ndarray] = None, dimension_hint: Optional[int] = None) -> WeightProfile:
    grid = graded_grid() if grid is None else np.asarray(grid, dtype=float)
    return WeightProfile(grid=grid, log_values=preset_log_weight(name, grid), dimension_hint=dimension_hint)


def _numeric_frame(path: Union[str, Path]) -> pd.DataFrame:
    """Whitespace- or comma-separated columns with '#' comments and an optional header row."""
    try:
        frame = pd.read_csv(path, comment="#", header=None, sep=r"[\s,]+", engine="python", dtype=str)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if frame.empty:
        raise ParseError(f"{path} holds no samples")
    head = pd.to_numeric(frame.iloc[0], errors="coerce")
    if head.isna().any():
        frame.columns = [str(c).strip() for c in frame.iloc[0]]
        frame = frame.iloc[1:]
    try:
        return frame.astype(float)
    except ValueError as exc:
        raise ParseError(f"non-numeric samples in {path}: {exc}") from exc


def load_profile_file(path: Union[str, Path], dimension_hint: Optional[int] = None) -> WeightProfile:
    """Read (radius, value) columns, or (r, ..., log_value) as written for radial majorants."""
    frame = _numeric_frame(path)
    if frame.shape[1] < 2:
        raise ParseError(f"weight file {path} needs two columns")
    grid = frame.iloc[:, 0].to_numpy()
    try:
        if "log_value" in frame.columns:
            return WeightProfile(grid=grid, log_values=frame["log_value"].to_numpy(), dimension_hint=dimension_hint)
        return WeightProfile.from_values(grid, frame.iloc[:, 1].to_numpy(), dimension_hint=dimension_hint)
    except InvalidSamples as exc:
        raise ParseError(f"invalid weight file {path}: {exc}") from exc


def load_weight(spec: str, dimension_hint: Optional[int] = None) -> WeightProfile:
    """Preset name or path to a two-column file."""
    if Path(spec).is_file():
        return load_profile_file(spec, dimension_hint=dimension_hint)
    return preset_profile(spec, dimension_hint=dimension_hint)


def _log_samples(omega: LogWeight):
    if isinstance(omega, WeightProfile):
        return omega.grid, omega.log_values
    return omega.grid, np.asarray(omega.values, dtype=float)


def _check_log_weight(grid: np.ndarray, log_values: np.ndarray) -> None:
    if np.any(log_values < 0):
        raise NegativeLogWeight(f"log-weight has negative samples (min {log_values.min():.3e})")
    settings = get_settings()
    if grid[-1] < settings.r_min:
        raise GridTooShort(f"grid reaches {grid[-1]:.3e}, below the minimum cutoff {settings.r_min:.3e}")


def _poisson_partial(grid: np.ndarray, log_values: np.ndarray, upto: float) -> float:
    """Exact integral of the piecewise-linear Omega against dr/(1+r^2) on [0, upto]."""
    keep = grid[:-1] < upto
    r0 = grid[:-1][keep]
    r1 = np.minimum(grid[1:][keep], upto)
    slope = np.diff(log_values)[keep] / np.diff(grid)[keep]
    intercept = log_values[:-1][keep] - slope * grid[:-1][keep]
    d_atan = np.arctan((r1 - r0) / (1.0 + r0 * r1))
    d_log = np.log1p((r1 * r1 - r0 * r0) / (1.0 + r0 * r0))
    return float(np.sum(intercept * d_atan + 0.5 * slope * d_log))


def log_integral_poisson(omega: LogWeight) -> LogIntegralResult:
    """Integral of Omega(r)/(1+r^2) over [0, R] with a doubling-rule tail check."""
    grid, log_values = _log_samples(omega)
    _check_log_weight(grid, log_values)
    settings = get_settings()
    cutoff = float(grid[-1])
    value, tail, divergent, partials = doubling_rule(
        lambda upto: _poisson_partial(grid, log_values, upto),
        cutoff,
        settings.epsilon_tail,
        settings.divergence_ceiling,
    )
    if divergent:
        logger.info(f"Logarithmic integral diverges (partials {partials})")
    return LogIntegralResult(value=value, tail_estimate=tail, divergent=divergent, cutoff=cutoff, partials=partials)


def _panel_partial(grid: np.ndarray, log_integrand, upto: float) -> float:
    edges = grid[grid < upto]
    edges = np.append(edges, upto)
    nodes, weights = panel_rule(edges, _PANEL_NODES)
    logs = log_integrand(nodes)
    return float(np.sum(weights * np.exp(np.minimum(logs, 700.0))))


def _panel_integral(grid: np.ndarray, log_integrand) -> LogIntegralResult:
    settings = get_settings()
    cutoff = float(grid[-1])
    value, tail, divergent, partials = doubling_rule(
        lambda upto: _panel_partial(grid, log_integrand, upto),
        cutoff,
        settings.epsilon_tail,
        settings.divergence_ceiling,
    )
    return LogIntegralResult(value=value, tail_estimate=tail, divergent=divergent, cutoff=cutoff, partials=partials)


def radial_log_integral(omega: LogWeight, d: int) -> LogIntegralResult:
    """Integral of Omega(r) r^{d-1} (1+r^2)^{-(d+1)/2}, the d-dimensional Poisson integral."""
    grid, log_values = _log_samples(omega)
    _check_log_weight(grid, log_values)

    def _log_integrand(r: np.ndarray) -> np.ndarray:
        om = np.interp(r, grid, log_values)
        with np.errstate(divide="ignore"):
            return np.log(np.maximum(om, 1e-300)) + (d - 1) * np.log(np.maximum(r, 1e-300)) - 0.5 * (d + 1) * np.log1p(r * r)

    return _panel_integral(grid, _log_integrand)


def weighted_l2_decay(phi: WeightProfile, d: int) -> LogIntegralResult:
    """Integral of phi^2 (1+r)^{2d+2}; finite means condition (i) holds."""
    grid, log_values = phi.grid, phi.log_values

    def _log_integrand(r: np.ndarray) -> np.ndarray:
        return -2.0 * np.interp(r, grid, log_values) + (2 * d + 2) * np.log1p(r)

    return _panel_integral(grid, _log_integrand)


def radial_l2_norm(phi: WeightProfile, d: int) -> LogIntegralResult:
    """Integral of phi^2 r^{d-1}; finite means the radial extension is in L^2(R^d)."""
    grid, log_values = phi.grid, phi.log_values

    def _log_integrand(r: np.ndarray) -> np.ndarray:
        return -2.0 * np.interp(r, grid, log_values) + (d - 1) * np.log(np.maximum(r, 1e-300))

    return _panel_integral(grid, _log_integrand)


def lipschitz_constant(omega: LogWeight) -> float:
    """max |dOmega/dr| over consecutive grid pairs.

    A lower estimate of the true Lipschitz constant.
    """
    grid, log_values = _log_samples(omega)
    if grid.size < 2:
        raise GridTooShort("Lipschitz estimate needs at least 2 grid points")
    return float(np.max(np.abs(np.diff(log_values) / np.diff(grid))))


def clamp_weight(phi: WeightProfile, q: float) -> WeightProfile:
    """Pointwise min(phi, (1+r)^{-q})."""
    if q <= 0:
        raise InvalidSamples(f"clamp exponent must be positive, got {q}")
    log_values = np.maximum(phi.log_values, q * np.log1p(phi.grid))
    return WeightProfile(grid=phi.grid.copy(), log_values=log_values, dimension_hint=phi.dimension_hint)


def even_extend(phi: WeightProfile) -> SampledFunction:
    """phi(|x|) on the line, stored on r >= 0 with the EVEN tag."""
    return SampledFunction(grid=phi.grid.copy(), values=phi.values.copy(), symmetry=Symmetry.EVEN)
