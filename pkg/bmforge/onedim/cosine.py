"""
Cosine Transform and the Even-Function Factor Check

    T g(y) = int_0^inf g(r) cos(r y) dr

For an even f on the line with g = f/2 on r >= 0, the cyclic Fourier
transform satisfies f^(t) = 4 T g(2 pi t).
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from ..domain.models import BandlimitedCandidate, SampledFunction, Units
from ..errors import InvalidSamples
from ..quadrature import check_moment_tail, linear_cosine, linear_fourier
from .spectral import origin_index

logger = logging.getLogger(__name__)


def fourier_1d(f: SampledFunction, t: Sequence[float], units: Units = Units.CYCLIC) -> np.ndarray:
    """Fourier integral of the piecewise-linear interpolant of ``f``."""
    full = f.full_line()
    t = np.atleast_1d(np.asarray(t, dtype=float))
    omega = 2.0 * np.pi * t if units is Units.CYCLIC else t
    return linear_fourier(full.grid, full.values, omega)


def cosine_transform(g: SampledFunction, y: Sequence[float]) -> SampledFunction:
    """Tg on the requested y grid (angular)."""
    if g.grid.size and g.grid[0] < 0:
        raise InvalidSamples("cosine transform needs samples on r >= 0")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if g.grid.size < 2 or not np.any(g.values):
        return SampledFunction(grid=y, values=np.zeros(y.size))
    check_moment_tail(g.grid, g.values, 1.0, "cosine transform")
    values = linear_cosine(g.grid, g.values, y)
    if not g.is_complex:
        values = values.real
    return SampledFunction(grid=y, values=values)


def generator_of(sym: BandlimitedCandidate) -> SampledFunction:
    """g = f_sym / 2 restricted to r >= 0."""
    mid = origin_index(sym.samples.grid.size)
    return SampledFunction(grid=sym.samples.grid[mid:], values=0.5 * sym.samples.values[mid:])


def even_factor_check(sym: BandlimitedCandidate, t: Sequence[float]) -> float:
    """max |f^(t) - 4 Tg(2 pi t)| / max |f^(t)| on the cyclic frequencies ``t``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    grid = sym.samples.grid[1:]
    values = sym.samples.values[1:]
    direct = linear_fourier(grid, values, 2.0 * np.pi * t)
    g = generator_of(sym)
    via_cosine = 4.0 * linear_cosine(g.grid, g.values, 2.0 * np.pi * t)
    scale = max(float(np.max(np.abs(direct))), np.finfo(float).tiny)
    error = float(np.max(np.abs(direct - via_cosine))) / scale
    logger.debug(f"Even factor check on {t.size} frequencies: relative error {error:.3e}")
    return error
