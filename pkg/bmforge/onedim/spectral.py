"""
Periodic Grids and Discrete Spectra

Candidates live on x_j = -L/2 + j L/n. With signed integer frequencies k
(cyclic frequency k/L) they expand as f(x_j) = sum_k a_k e^{2 pi i k x_j / L},
a_k = F_k (-1)^k / n where F is the FFT of the samples.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import numpy as np

from ..domain.models import BandlimitedCandidate, SampledFunction
from ..errors import InvalidSamples

logger = logging.getLogger(__name__)

BAND_TOL = 1e-9
MAJORIZATION_TOL = 1e-9


def periodic_grid(n: int, extent: float) -> np.ndarray:
    if n < 4 or n & (n - 1):
        raise InvalidSamples(f"grid points must be a power of two >= 4, got {n}")
    if extent <= 0:
        raise InvalidSamples(f"extent must be positive, got {extent}")
    period = 2.0 * extent
    return -extent + (period / n) * np.arange(n)


def origin_index(n: int) -> int:
    return n // 2


def reflect(values: np.ndarray) -> np.ndarray:
    """Samples of f(-x) on the same periodic grid."""
    n = values.size
    return values[(n - np.arange(n)) % n]


def frequencies(n: int) -> np.ndarray:
    """Signed integer frequencies in FFT order."""
    return np.rint(np.fft.fftfreq(n) * n)


def _alternating(k: np.ndarray) -> np.ndarray:
    return 1.0 - 2.0 * np.mod(k.astype(np.int64), 2)


def coefficients(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(k, a_k) in FFT order."""
    n = values.size
    k = frequencies(n)
    return k, np.fft.fft(values) * _alternating(k) / n


def synthesize(k: np.ndarray, a: np.ndarray) -> np.ndarray:
    return np.fft.ifft(a * _alternating(k)) * k.size


def band_mask(n: int, period: float, band: Tuple[float, float]) -> np.ndarray:
    freq = frequencies(n) / period
    tol = BAND_TOL / period
    return (freq >= band[0] - tol) & (freq <= band[1] + tol)


def project_band(values: np.ndarray, period: float, band: Tuple[float, float]) -> np.ndarray:
    spectrum = np.fft.fft(values)
    spectrum[~band_mask(values.size, period, band)] = 0.0
    return np.fft.ifft(spectrum)


def taper_window(x: np.ndarray, width: float, order: int) -> np.ndarray:
    """sinc(2 width x / order)^order.

    Equals 1 at x = 0, stays in [0, 1] for even ``order`` and has its
    continuous spectrum inside [-width, width]. A trigonometric polynomial
    with frequencies in [a, b] times the window has its spectrum on the
    whole line inside [a - width, b + width].
    """
    if width <= 0 or order < 2 or order % 2:
        raise InvalidSamples(f"taper needs width > 0 and an even order >= 2, got {width}, {order}")
    return np.sinc(2.0 * width * np.asarray(x, dtype=float) / order) ** order


def leakage_1d(values: np.ndarray, period: float, band: Tuple[float, float]) -> float:
    """Share of discrete Fourier energy outside ``band`` (cyclic units)."""
    energy = np.abs(np.fft.fft(values)) ** 2
    total = float(np.sum(energy))
    if total == 0.0:
        return 0.0
    outside = float(np.sum(energy[~band_mask(values.size, period, band)]))
    return min(1.0, max(0.0, outside / total))


def lipschitz_bound(grid: np.ndarray, values: np.ndarray) -> float:
    """max |f(x_{j+1}) - f(x_j)| / h, wrapping around the period."""
    h = grid[1] - grid[0]
    return float(np.max(np.abs(np.diff(np.append(values, values[0])))) / h)


def bernstein_bound(values: np.ndarray, period: float, band: Tuple[float, float]) -> float:
    """2 pi Lambda sqrt(W + 1/L) ||f||_2 for a spectrum inside ``band``."""
    top = max(abs(band[0]), abs(band[1]))
    width = band[1] - band[0]
    norm = np.sqrt(np.sum(np.abs(values) ** 2) * period / values.size)
    return float(2.0 * np.pi * top * np.sqrt(width + 1.0 / period) * norm)


def make_candidate(
    values: np.ndarray,
    grid: np.ndarray,
    sigma: float,
    band: Tuple[float, float],
    weight_values: np.ndarray,
    flags: Optional[List[str]] = None,
    zero_order: int = 0,
    deflation_scale: float = 1.0,
) -> BandlimitedCandidate:
    values = np.asarray(values, dtype=complex)
    n = values.size
    period = n * (grid[1] - grid[0])
    flags = list(flags or [])
    lip = lipschitz_bound(grid, values)
    bern = bernstein_bound(values, period, band)
    if lip > bern * (1.0 + MAJORIZATION_TOL):
        flags.append("bernstein_violated")
        logger.warning(f"Measured Lipschitz bound {lip:.4g} exceeds the Bernstein bound {bern:.4g}")
    return BandlimitedCandidate(
        samples=SampledFunction(grid=grid, values=values),
        sigma=sigma,
        band=band,
        weight=SampledFunction(grid=grid, values=np.asarray(weight_values, dtype=float)),
        period=period,
        origin_value=complex(values[origin_index(n)]),
        lipschitz_bound=lip,
        bernstein_bound=bern,
        leakage=leakage_1d(values, period, band),
        zero_order=zero_order,
        deflation_scale=deflation_scale,
        flags=flags,
    )
